//! Boundary agreement between annotators who marked spans on the same text.

use std::collections::BTreeMap;

use empathy_workbench::agreement::{unitized_alpha_detail, Continuum, SamplerConfig};
use empathy_workbench::corpus::Span;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let continuum = |a: Vec<Span>, b: Vec<Span>| Continuum {
        extent: Span::new(0, 60),
        units: BTreeMap::from([("anna".to_string(), a), ("ben".to_string(), b)]),
    };
    let cases = [
        ("identical", continuum(vec![Span::new(5, 20), Span::new(30, 45)], vec![Span::new(5, 20), Span::new(30, 45)])),
        ("shifted", continuum(vec![Span::new(5, 20), Span::new(30, 45)], vec![Span::new(8, 22), Span::new(28, 45)])),
        ("disjoint", continuum(vec![Span::new(0, 10)], vec![Span::new(40, 58)])),
    ];
    for (name, c) in cases {
        let r = unitized_alpha_detail(&[c], SamplerConfig { rounds: 2000, seed: 7 })?;
        println!("{name:<10} alpha_u {:+.4}  (observed {:.2}, expected {:.2})", r.alpha, r.observed, r.expected);
    }
    Ok(())
}
