//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::Request;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower::ServiceExt;

use empathy_workbench::agreement::{
    confusion_probability_matrix, krippendorff_alpha_nominal, multi_pi, percentage_agreement, unitized_alpha,
    Continuum, ItemTable, SamplerConfig,
};
use empathy_workbench::analytics::{
    corpus_stats, macro_average, split_corpus, weighted_average, ClassMetrics, SplitRatios, StatsReport,
};
use empathy_workbench::cli::{self, Io};
use empathy_workbench::corpus::{
    parse_corpus, AnnotatedCorpus, AnnotatedDocument, ComponentLabel, EmpathyScore, Span, SpanAnnotation,
};
use empathy_workbench::scorer::{bucketize, Bucket, Language, Rubric};
use empathy_workbench::service::{router, AppState, Analyzer, SurveyStore};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// ---------------------------------------------------------------------------
// 1. brute-force agreement oracles

type Table = Vec<BTreeMap<usize, u8>>;

fn random_table(rng: &mut ChaCha8Rng) -> Table {
    let annotators = rng.gen_range(2..=3);
    let items = rng.gen_range(1..=10);
    let labels = rng.gen_range(1..=4u8);
    (0..items)
        .map(|_| {
            let mut item = BTreeMap::new();
            for a in 0..annotators {
                if rng.gen_bool(0.85) {
                    item.insert(a, rng.gen_range(0..labels));
                }
            }
            item
        })
        .collect()
}

fn to_item_table(t: &Table) -> ItemTable<u8> {
    t.iter().map(|item| item.iter().map(|(a, l)| (format!("a{a}"), *l)).collect()).collect()
}

/// Values of one item as a plain list.
fn values(item: &BTreeMap<usize, u8>) -> Vec<u8> {
    item.values().copied().collect()
}

fn oracle_percentage(t: &Table) -> Option<f64> {
    let mut scores = Vec::new();
    for item in t {
        let v = values(item);
        if v.len() < 2 {
            continue;
        }
        let (mut agree, mut total) = (0, 0);
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                total += 1;
                agree += (v[i] == v[j]) as usize;
            }
        }
        scores.push(agree as f64 / total as f64);
    }
    (!scores.is_empty()).then(|| scores.iter().sum::<f64>() / scores.len() as f64)
}

fn oracle_multi_pi(t: &Table) -> Option<f64> {
    let m = t.iter().map(|i| i.len()).max()?;
    if m < 2 {
        return None;
    }
    let complete: Vec<Vec<u8>> = t.iter().filter(|i| i.len() == m).map(values).collect();
    let mut p_o = 0.0;
    for v in &complete {
        let mut agree = 0;
        for i in 0..m {
            for j in 0..m {
                if i != j && v[i] == v[j] {
                    agree += 1;
                }
            }
        }
        p_o += agree as f64 / (m * (m - 1)) as f64;
    }
    p_o /= complete.len() as f64;
    let pool: Vec<u8> = complete.concat();
    let mut p_e = 0.0;
    for label in 0..4u8 {
        let p = pool.iter().filter(|&&l| l == label).count() as f64 / pool.len() as f64;
        p_e += p * p;
    }
    if close(p_e, 1.0, 1e-15) {
        return close(p_o, 1.0, 1e-15).then_some(1.0);
    }
    Some((p_o - p_e) / (1.0 - p_e))
}

fn oracle_alpha(t: &Table) -> Option<f64> {
    let pairable: Vec<Vec<u8>> = t.iter().map(values).filter(|v| v.len() >= 2).collect();
    let pool: Vec<u8> = pairable.concat();
    let n = pool.len() as f64;
    if n == 0.0 {
        return None;
    }
    let mut d_o = 0.0;
    for v in &pairable {
        let mut differ = 0;
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i != j && v[i] != v[j] {
                    differ += 1;
                }
            }
        }
        d_o += differ as f64 / (v.len() - 1) as f64;
    }
    d_o /= n;
    let mut differ = 0;
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            if i != j && pool[i] != pool[j] {
                differ += 1;
            }
        }
    }
    let d_e = differ as f64 / (n * (n - 1.0));
    if d_e == 0.0 {
        return (d_o == 0.0).then_some(1.0);
    }
    Some(1.0 - d_o / d_e)
}

/// Row-conditional label probabilities over ordered annotator pairs.
fn oracle_cpm(t: &Table) -> BTreeMap<(u8, u8), f64> {
    let mut counts: BTreeMap<(u8, u8), u64> = BTreeMap::new();
    for item in t {
        for (a, la) in item {
            for (b, lb) in item {
                if a != b {
                    *counts.entry((*la, *lb)).or_default() += 1;
                }
            }
        }
    }
    let mut rows: BTreeMap<u8, u64> = BTreeMap::new();
    for ((r, _), c) in &counts {
        *rows.entry(*r).or_default() += c;
    }
    counts.iter().map(|(&(r, c), &n)| ((r, c), n as f64 / rows[&r] as f64)).collect()
}

fn matches(name: &str, got: Option<f64>, want: Option<f64>) -> std::result::Result<(), String> {
    match (got, want) {
        (Some(g), Some(w)) if close(g, w, 1e-9) => Ok(()),
        (None, None) => Ok(()),
        _ => Err(format!("{name}: implementation {got:?}, oracle {want:?}")),
    }
}

fn criterion_1() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..200 {
        let t = random_table(&mut rng);
        let table = to_item_table(&t);
        let ctx = |e: String| format!("table {case}: {e}");
        matches("percentage", percentage_agreement(&table).ok(), oracle_percentage(&t)).map_err(ctx)?;
        matches("multi-pi", multi_pi(&table).ok(), oracle_multi_pi(&t)).map_err(ctx)?;
        matches("alpha", krippendorff_alpha_nominal(&table).ok(), oracle_alpha(&t)).map_err(ctx)?;

        let want = oracle_cpm(&t);
        let cpm = confusion_probability_matrix(&table).map_err(|e| ctx(e.to_string()))?;
        for (r, row_label) in cpm.labels.iter().enumerate() {
            for (c, col_label) in cpm.labels.iter().enumerate() {
                let key = (row_label.parse::<u8>().unwrap(), col_label.parse::<u8>().unwrap());
                let row_defined = want.keys().any(|k| k.0 == key.0);
                let expected = row_defined.then(|| want.get(&key).copied().unwrap_or(0.0));
                matches("cpm", cpm.get(r, c), expected).map_err(ctx)?;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("200 random tables match brute-force oracles within 1e-9 in {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// 2. unitized alpha

fn continuum(len: usize, units: &[(&str, Vec<Span>)]) -> Continuum {
    Continuum {
        extent: Span::new(0, len),
        units: units.iter().map(|(a, u)| (a.to_string(), u.clone())).collect(),
    }
}

fn random_span(rng: &mut ChaCha8Rng, len: usize) -> Span {
    let l = rng.gen_range(1..=len / 2);
    let start = rng.gen_range(0..=len - l);
    Span::new(start, start + l)
}

fn criterion_2() -> Check {
    let config = SamplerConfig::default();
    let same = vec![Span::new(3, 9), Span::new(20, 31)];
    let identical = unitized_alpha(&[continuum(40, &[("a", same.clone()), ("b", same.clone()), ("c", same)])], config)
        .map_err(|e| e.to_string())?;
    ensure(close(identical, 1.0, 1e-6), || format!("identical spans gave {identical}"))?;

    let mut total = 0.0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let continua: Vec<Continuum> = (0..5)
            .map(|_| {
                let len = 100;
                continuum(len, &[("a", vec![random_span(&mut rng, len)]), ("b", vec![random_span(&mut rng, len)])])
            })
            .collect();
        total += unitized_alpha(&continua, SamplerConfig { rounds: 200, seed }).map_err(|e| e.to_string())?;
    }
    let mean = total / 100.0;
    ensure(mean.abs() <= 0.1, || format!("random spans: mean alpha_u {mean}"))?;

    let fixed = [continuum(50, &[("a", vec![Span::new(2, 10)]), ("b", vec![Span::new(4, 12), Span::new(30, 35)])])];
    let first = unitized_alpha(&fixed, config).map_err(|e| e.to_string())?;
    let second = unitized_alpha(&fixed, config).map_err(|e| e.to_string())?;
    ensure(first.to_bits() == second.to_bits(), || format!("{first} vs {second}"))?;
    Ok(format!("identical = {identical:.6}, random mean = {mean:+.4}, fixed seed bit-identical"))
}

// ---------------------------------------------------------------------------
// 3. printed-table arithmetic

fn criterion_3() -> Check {
    let rows = [("non-empathic", 0.5746, 136), ("neutral", 0.6364, 112), ("slightly", 0.5240, 191), ("empathic", 0.9863, 295)];
    let classes: Vec<ClassMetrics> = rows
        .iter()
        .map(|&(label, precision, support)| ClassMetrics {
            label: label.into(),
            precision,
            recall: 0.0,
            f1: 0.0,
            support,
            ill_defined: false,
        })
        .collect();
    let macro_p = macro_average(&classes).precision;
    let weighted_p = weighted_average(&classes).precision;
    ensure(close(macro_p, 0.6803, 0.0005), || format!("macro precision {macro_p}"))?;
    ensure(close(weighted_p, 0.7363, 0.0005), || format!("weighted precision {weighted_p}"))?;
    Ok(format!("macro precision {macro_p:.4}, weighted precision {weighted_p:.4}"))
}

// ---------------------------------------------------------------------------
// 4. corpus statistics

fn check_synthetic(report: &StatsReport, correlation: f64) -> std::result::Result<(), String> {
    // values worked out by hand for tests/fixtures/synthetic_corpus.json
    let eq = |name: &str, got: f64, want: f64| ensure(close(got, want, 1e-12), || format!("{name}: {got} != {want}"));
    eq("documents", report.documents as f64, 4.0)?;
    eq("sentences", report.sentences.total, 14.0)?;
    eq("tokens", report.tokens.total, 69.0)?;
    for c in &report.components {
        eq(c.component.as_str(), c.per_document.total, 6.0)?;
        eq("share", c.share, 1.0 / 3.0)?;
    }
    let cognitive = &report.scores[0];
    let emotional = &report.scores[1];
    eq("cognitive mean", cognitive.mean, 26.0 / 9.0)?;
    eq("emotional mean", emotional.mean, 3.0)?;
    ensure(cognitive.histogram == [2, 6, 4, 4, 2], || format!("{:?}", cognitive.histogram))?;
    ensure(emotional.histogram == [4, 2, 6, 2, 4], || format!("{:?}", emotional.histogram))?;
    // sxy = 22, sxx = 232/9, syy = 36 over the 18 annotations
    let want_r = 22.0 / ((232.0f64 / 9.0).sqrt() * 6.0);
    eq("pearson", correlation, want_r)
}

fn check_released(report: &StatsReport) -> std::result::Result<(), String> {
    let totals: Vec<f64> = report.components.iter().map(|c| c.per_document.total).collect();
    ensure(totals == [2107.0, 3505.0, 2140.0], || format!("component totals {totals:?}"))?;
    ensure(close(report.scores[0].mean, 2.94, 0.01), || format!("cognitive mean {}", report.scores[0].mean))?;
    ensure(close(report.scores[1].mean, 3.22, 0.01), || format!("emotional mean {}", report.scores[1].mean))?;
    let r = report.correlation.ok_or("correlation undefined")?;
    ensure(close(r, 0.38, 0.02), || format!("pearson {r}"))?;
    let within = |got: f64, want: f64| (got - want).abs() <= 0.05 * want;
    ensure(within(report.sentences.total, 9614.0), || format!("sentences {}", report.sentences.total))?;
    ensure(within(report.tokens.total, 126_887.0), || format!("tokens {}", report.tokens.total))
}

fn criterion_4() -> Check {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synthetic_corpus.json");
    let corpus = parse_corpus(&std::fs::read(fixture).map_err(|e| e.to_string())?, true).map_err(|e| e.to_string())?;
    let report = corpus_stats(&corpus).map_err(|e| e.to_string())?;
    check_synthetic(&report, report.correlation.ok_or("correlation undefined")?)?;
    match std::env::var_os("EMPATHY_CORPUS") {
        Some(path) => {
            let bytes = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.to_string_lossy()))?;
            let released = parse_corpus(&bytes, false).map_err(|e| e.to_string())?;
            check_released(&corpus_stats(&released).map_err(|e| e.to_string())?)?;
            Ok("synthetic fixture exact; released corpus within tolerances".into())
        }
        None => Ok("synthetic fixture matched exactly (set EMPATHY_CORPUS to check the released corpus)".into()),
    }
}

// ---------------------------------------------------------------------------
// 5. rubric fidelity

const BASES_DE: &[&str] = &[
    "Die Idee ist gut.",
    "Es fehlt ein Bild.",
    "Das Geschäftsmodell ist unklar. Die Zielgruppe wird nicht beschrieben.",
    "Füge eine Grafik hinzu.",
    "Der Text ist lang. Die Gliederung ist okay. Das Ende kommt abrupt.",
];
const BASES_EN: &[&str] = &[
    "Add a picture.",
    "The idea is fine.",
    "The pricing section is missing. The target group is vague.",
    "I think your idea is brilliant!",
];
const CUES_DE: &[&str] = &[
    "Ich bin begeistert!",
    "Das finde ich sehr gut.",
    "Du hast das toll gemacht!",
    "Vielleicht passt das.",
    "Das ist wichtig, weil Kunden Bilder mögen.",
    "Zum Beispiel mit einem Foto.",
    "Was meinst du dazu?",
    "Deshalb solltest du das ändern.",
    "Leider fehlt etwas.",
];
const CUES_EN: &[&str] = &[
    "I am impressed!",
    "You did a great job.",
    "Maybe this works.",
    "This matters because customers like pictures.",
    "For example, add a photo.",
    "What do you think?",
    "Your structure is excellent!",
];

/// Inserts whole cue sentences at sentence boundaries; every feature count
/// can only grow.
fn mutate(rng: &mut ChaCha8Rng, base: &str, cues: &[&str]) -> String {
    let mut sentences: Vec<String> = base.split_inclusive(['.', '!', '?']).map(|s| s.trim().to_string()).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let at = rng.gen_range(0..=sentences.len());
        sentences.insert(at, cues[rng.gen_range(0..cues.len())].to_string());
    }
    sentences.join(" ")
}

fn criterion_5() -> Check {
    let en = Rubric::builtin(Language::En);
    let de = Rubric::builtin(Language::De);
    let brilliant = en.score("I think your idea is brilliant!").map_err(|e| e.to_string())?;
    ensure(brilliant.emotional.value() >= 4, || format!("brilliant: emotional {}", brilliant.emotional.value()))?;
    let picture = en.score("Add a picture.").map_err(|e| e.to_string())?;
    ensure(picture.emotional.value() == 1, || format!("picture: emotional {}", picture.emotional.value()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let (rubric, bases, cues) = if i % 2 == 0 { (&de, BASES_DE, CUES_DE) } else { (&en, BASES_EN, CUES_EN) };
        let base = bases[rng.gen_range(0..bases.len())];
        let mutated = mutate(&mut rng, base, cues);
        let before = rubric.score(base).map_err(|e| e.to_string())?;
        let after = rubric.score(&mutated).map_err(|e| e.to_string())?;
        ensure(after.cognitive >= before.cognitive && after.emotional >= before.emotional, || {
            format!(
                "`{base}` ({}, {}) -> `{mutated}` ({}, {})",
                before.cognitive.value(),
                before.emotional.value(),
                after.cognitive.value(),
                after.emotional.value()
            )
        })?;
    }
    Ok(format!(
        "brilliant -> emotional {}, picture -> emotional {}, 1000 mutations without violation",
        brilliant.emotional.value(),
        picture.emotional.value()
    ))
}

// ---------------------------------------------------------------------------
// 6. buckets and split

fn synthetic_corpus(n: usize) -> AnnotatedCorpus {
    let documents = (0..n)
        .map(|i| AnnotatedDocument {
            id: format!("doc{i:04}"),
            text: format!("Review number {i}. It is fine."),
            annotations: vec![SpanAnnotation {
                annotator: "a".into(),
                start: 0,
                end: 6,
                component: ComponentLabel::Strength,
                cognitive: EmpathyScore::new(1 + (i % 5) as i64).unwrap(),
                emotional: EmpathyScore::new(1 + (i % 3) as i64).unwrap(),
            }],
        })
        .collect();
    AnnotatedCorpus { documents }
}

fn ids(c: &AnnotatedCorpus) -> Vec<String> {
    c.documents.iter().map(|d| d.id.clone()).collect()
}

fn criterion_6() -> Check {
    let expected = [Bucket::NonEmpathic, Bucket::NonEmpathic, Bucket::Neutral, Bucket::Empathic, Bucket::Empathic];
    for (score, want) in (1..=5).zip(expected) {
        let got = bucketize(score).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("score {score} -> {got:?}"))?;
    }
    ensure(bucketize(0).is_err() && bucketize(6).is_err(), || "out-of-range score accepted".into())?;

    let corpus = synthetic_corpus(500);
    let ratios = SplitRatios { train: 0.7, val: 0.2, test: 0.1 };
    let a = split_corpus(&corpus, ratios, 42).map_err(|e| e.to_string())?;
    let b = split_corpus(&corpus, ratios, 42).map_err(|e| e.to_string())?;
    let sizes = (a.train.documents.len(), a.val.documents.len(), a.test.documents.len());
    ensure(sizes == (350, 100, 50), || format!("sizes {sizes:?}"))?;
    ensure(ids(&a.train) == ids(&b.train) && ids(&a.val) == ids(&b.val) && ids(&a.test) == ids(&b.test), || {
        "same seed gave different splits".into()
    })?;
    let all: BTreeSet<String> = ids(&a.train).into_iter().chain(ids(&a.val)).chain(ids(&a.test)).collect();
    ensure(all.len() == 500, || format!("partition covers {} ids", all.len()))?;
    Ok("1,2 -> non-empathic, 3 -> neutral, 4,5 -> empathic; 500 docs -> 350/100/50, reproducible".into())
}

// ---------------------------------------------------------------------------
// 7. determinism and latency

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut stdin: &[u8] = &[];
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let mut io = Io { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr, terminal: false };
    let code = cli::run(std::iter::once("empathy").chain(args.iter().copied()), &mut io);
    (code, stdout)
}

fn review_300_tokens() -> String {
    let sentence = "Ich finde deine Idee sehr gut, weil sie zum Beispiel Studierenden hilft, und du solltest das Modell genauer erklären!";
    let mut review = String::from("Stärken:");
    while empathy_workbench::corpus::tokenize(&review).len() < 300 {
        review.push(' ');
        review.push_str(sentence);
    }
    review
}

async fn post_analyze(app: &axum::Router, body: &str) -> Result<Vec<u8>, String> {
    let request = Request::post("/api/analyze")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .map_err(|e| e.to_string())?;
    let response = app.clone().oneshot(request).await.map_err(|e| e.to_string())?;
    ensure(response.status() == 200, || format!("status {}", response.status()))?;
    let bytes = axum::body::to_bytes(response.into_body(), usize::MAX).await.map_err(|e| e.to_string())?;
    Ok(bytes.to_vec())
}

fn criterion_7() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let state = AppState::new(Analyzer::default(), SurveyStore::new(dir.path().join("survey.jsonl")));
    let app = router(Arc::new(state));
    let review = review_300_tokens();
    let body = serde_json::json!({ "text": review, "language": "de" }).to_string();

    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let (identical, p50) = runtime.block_on(async {
        let first = post_analyze(&app, &body).await?;
        let mut times = Vec::new();
        let mut identical = true;
        for _ in 0..41 {
            let started = Instant::now();
            let again = post_analyze(&app, &body).await?;
            times.push(started.elapsed());
            identical &= again == first;
        }
        times.sort();
        Ok::<_, String>((identical, times[times.len() / 2]))
    })?;
    ensure(identical, || "analyze responses differ between identical requests".into())?;
    ensure(p50 < Duration::from_millis(50), || format!("p50 latency {p50:?}"))?;

    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synthetic_corpus.json");
    for args in [
        vec!["stats", fixture],
        vec!["stats", fixture, "--format", "table"],
        vec!["iaa", fixture, "--alpha-u", "--seed", "7", "--rounds", "100"],
        vec!["iaa", fixture, "--format", "table"],
    ] {
        let (code_a, a) = run_cli(&args);
        let (code_b, b) = run_cli(&args);
        ensure(code_a == 0 && code_b == 0, || format!("{args:?} exited {code_a}/{code_b}"))?;
        ensure(a == b && !a.is_empty(), || format!("{args:?} output not byte-stable"))?;
    }
    let tokens = empathy_workbench::corpus::tokenize(&review).len();
    Ok(format!("analyze byte-identical, p50 {p50:.2?} for {tokens} tokens; stats/iaa byte-stable"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("agreement oracle equivalence", criterion_1),
        ("unitized alpha properties", criterion_2),
        ("printed-table arithmetic", criterion_3),
        ("corpus statistics", criterion_4),
        ("rubric fidelity", criterion_5),
        ("bucketing and split", criterion_6),
        ("pipeline determinism", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
