use crate::config::{read, write, Cli, CliError, CliResult, Command, Format, RunConfig};
use mal::algebra::{Element, Sign};
use mal::family::{
    crushed_extension_stage, express, family_measure, ledger_bound, non_sigma_additive_chain, refute_lower_bound,
    ssjhd_lower_bound_refuter, verify_family, Family, PropertyReport, EXAMPLES,
};
use mal::integration::{integrate_bounded, integrate_lazy, integrate_simple, l1_norm};
use mal::representation::{build_representation, verify_partans_conditions};
use mal::riesz::{haar_expand, haar_on_particle, rademacher_system, HaarIndex, LazySimple, StepElement};
use mal::scalar::{rat, DyadicRational, Rational};
use mal::algebra::DyadicSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

const MAX_HAAR_DEPTH: usize = 10;

/// Runs one command; `Ok(false)` means a checked property failed.
pub fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Verify(c) => verify(&c),
        Command::Measure(c) => measure(&c),
        Command::Haar(c) => haar(&c),
        Command::Integrate(c) => integrate(&c),
        Command::Represent(c) => represent(&c),
        Command::Examples(c) => examples(&c),
        Command::Report(c) => report(&c),
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Prints `text` or the JSON value, and writes the JSON to `--out` if set.
fn emit(cfg: &RunConfig, text: String, value: &Value) -> CliResult<()> {
    match cfg.format {
        Format::Text => print!("{text}"),
        Format::Json => print!("{}", pretty(value)),
    }
    if let Some(out) = &cfg.out {
        write(out, &pretty(value))?;
    }
    Ok(())
}

fn report_text(r: &PropertyReport) -> String {
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    let mut s = format!("family {}: {}\n", r.family, r.label);
    match &r.r1.witness {
        None => s += "r1: pass\n",
        Some(w) => s += &format!("r1: FAIL, zero particle {w}\n"),
    }
    match r.r2_pass {
        None => s += "r2: not applicable (no Lebesgue measure)\n",
        Some(ok) => {
            let stalled: Vec<String> = r.r2_paths.iter().filter(|p| p.stalled).map(|p| p.path.to_string()).collect();
            s += &format!("r2: {}{}\n", verdict(ok), if ok { String::new() } else { format!(", stalled {}", stalled.join(" ")) });
        }
    }
    let failed: Vec<String> = r.r3.iter().filter(|v| !v.pass).map(|v| v.index.to_string()).collect();
    s += &format!("r3: {}{}\n", verdict(failed.is_empty()), if failed.is_empty() { String::new() } else { format!(", generated: {}", failed.join(",")) });
    s += &format!("r4: {} ({} of {} targets generated)\n", verdict(r.r4.generated == r.r4.probed), r.r4.generated, r.r4.probed);
    s
}

fn verify(cfg: &RunConfig) -> CliResult<bool> {
    let fam = cfg.family()?;
    let depth = cfg.depth(fam.len(), 10)?;
    let props = cfg.properties()?;
    let report = verify_family(&fam, depth)?;
    emit(cfg, report_text(&report), &to_json(&report))?;
    Ok(report.passes(&props))
}

fn particle_table(fam: &Family, depth: usize) -> CliResult<Vec<Value>> {
    let mut rows = Vec::new();
    for (sv, p) in fam.partition(depth)? {
        let m = family_measure(fam, &p, depth)?;
        rows.push(json!({
            "particle": sv.sign_string(),
            "dyadic": m.to_string(),
            "lebesgue": p.lebesgue().ok().map(|q| q.to_string()),
        }));
    }
    Ok(rows)
}

fn measure(cfg: &RunConfig) -> CliResult<bool> {
    let fam = cfg.family()?;
    if let Some(path) = &cfg.element {
        let x: Element = serde_json::from_str(&read(path)?).map_err(|e| mal::Error::Parse(e.to_string()))?;
        let m = family_measure(&fam, &x, fam.len())?;
        let free = express(&fam, &x, fam.len())?;
        let value = json!({ "measure": m.to_string(), "free": to_json(&Element::Free(free)) });
        emit(cfg, format!("dyadic measure {m}\n"), &value)?;
        return Ok(true);
    }
    let depth = cfg.depth(fam.len(), 4)?;
    let rows = particle_table(&fam, depth)?;
    let mut text = format!("{} particles at depth {depth}\n", rows.len());
    for r in &rows {
        text += &format!("{}  {}\n", r["particle"].as_str().unwrap_or(""), r["dyadic"].as_str().unwrap_or(""));
    }
    emit(cfg, text, &json!({ "family": fam.name(), "depth": depth, "particles": rows }))?;
    Ok(true)
}

/// A step element with small random values on the depth-`depth` particles.
fn sample_step(fam: &Family, depth: usize, seed: u64) -> CliResult<StepElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<Rational> =
        (0..1usize << depth).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=4))).collect();
    Ok(StepElement::from_particle_values(fam, depth, &values)?)
}

fn load_step(path: &Path) -> CliResult<StepElement> {
    Ok(serde_json::from_str(&read(path)?).map_err(|e| mal::Error::Parse(e.to_string()))?)
}

/// Haar rows with Gram-matrix checks computed from the particle measures.
fn haar_table(fam: &Family, depth: usize, x: &StepElement) -> CliResult<(Vec<Value>, bool, bool)> {
    if depth > MAX_HAAR_DEPTH {
        return Err(CliError::Usage(format!("haar depth {depth} exceeds {MAX_HAAR_DEPTH}")));
    }
    let indices: Vec<u32> = fam.prefix(depth)?.iter().map(|g| g.index).collect();
    let mut signs = Vec::new();
    let mut weights = Vec::new();
    for (sv, p) in fam.partition(depth)? {
        signs.push(indices.iter().map(|&i| sv.sign_of(i).unwrap_or(Sign::Plus)).collect::<Vec<_>>());
        weights.push(family_measure(fam, &p, depth)?.to_rational());
    }
    let n = 1u64 << depth;
    let idxs = (1..=n).map(HaarIndex::from_linear).collect::<mal::Result<Vec<_>>>()?;
    let values: Vec<Vec<i8>> = idxs.iter().map(|&h| signs.iter().map(|s| haar_on_particle(h, s)).collect()).collect();
    let inner = |i: usize, j: usize| -> Rational {
        weights.iter().enumerate().map(|(s, w)| w * Rational::from_integer((values[i][s] * values[j][s]).into())).sum()
    };
    let expansion = haar_expand(x, fam, depth)?;
    let mut all_orthogonal = true;
    let mut rows = Vec::new();
    for (i, idx) in idxs.iter().enumerate() {
        let orthogonal = (0..idxs.len()).filter(|&j| j != i).all(|j| inner(i, j) == Rational::from_integer(0.into()));
        all_orthogonal &= orthogonal;
        let (level, k, eps) = match *idx {
            HaarIndex::Constant => (0, 0, String::new()),
            HaarIndex::First => (1, 1, String::new()),
            HaarIndex::Split { n, k } => (n, k, idx.signs().iter().map(|s| s.symbol()).collect()),
        };
        rows.push(json!({
            "index": idx.linear(),
            "n": level,
            "k": k,
            "signs": eps,
            "norm": inner(i, i).to_string(),
            "coefficient": expansion.coefficients[i].to_string(),
            "orthogonal": orthogonal,
        }));
    }
    Ok((rows, all_orthogonal, expansion.residual.is_zero()))
}

fn haar_depth(cfg: &RunConfig, fam: &Family, default: usize) -> CliResult<usize> {
    let d = cfg.haar_depth.or(cfg.depth).unwrap_or(fam.len().min(default));
    if d > MAX_HAAR_DEPTH {
        return Err(CliError::Usage(format!("haar depth {d} exceeds {MAX_HAAR_DEPTH}")));
    }
    Ok(d)
}

fn haar(cfg: &RunConfig) -> CliResult<bool> {
    let fam = cfg.family()?;
    let depth = haar_depth(cfg, &fam, 3)?;
    let x = match &cfg.step {
        Some(p) => load_step(p)?,
        None => sample_step(&fam, depth, cfg.seed)?,
    };
    let (rows, orthogonal, exact) = haar_table(&fam, depth, &x)?;
    let mut text = format!("{} Haar elements at depth {depth}; orthogonal: {orthogonal}; exact reconstruction: {exact}\n", rows.len());
    for r in &rows {
        text += &format!("h_{:<4} norm {:<8} coefficient {}\n", r["index"], r["norm"].as_str().unwrap_or(""), r["coefficient"].as_str().unwrap_or(""));
    }
    let value = json!({ "family": fam.name(), "depth": depth, "orthogonal": orthogonal, "exact": exact, "rows": rows });
    emit(cfg, text, &value)?;
    Ok(orthogonal && exact)
}

fn integrals_of(x: &StepElement, fam: &Family, tol: &Rational) -> CliResult<Value> {
    Ok(json!({
        "simple": to_json(&integrate_simple(x, fam)?),
        "bounded": to_json(&integrate_bounded(x, fam, tol)?),
        "l1": to_json(&l1_norm(x, fam)?),
    }))
}

fn integrate(cfg: &RunConfig) -> CliResult<bool> {
    let tol = cfg.tolerance()?;
    if let Some(p) = &cfg.step {
        let fam = cfg.family()?;
        let x = load_step(p)?;
        let value = integrals_of(&x, &fam, &tol)?;
        let text = format!("integral {} ({})\n", value["simple"]["value"].as_str().unwrap_or(""), value["simple"]["decimal"].as_str().unwrap_or(""));
        emit(cfg, text, &value)?;
        return Ok(true);
    }
    // The lazy geometric example lives on [0,1) and needs enough usual generators.
    let fam = if cfg.family.is_some() || cfg.example.is_some() {
        cfg.family()?
    } else {
        mal::family::example_family("usual", &mal::family::ExampleParams::with_n(21))?
    };
    let v = integrate_lazy(&LazySimple::geometric(), &fam, &tol)?;
    let text = format!("geometric sum: {} in [{}, {}] ({})\n", v.value, v.lo, v.hi, v.decimal);
    emit(cfg, text, &to_json(&v))?;
    Ok(true)
}

fn represent_value(fam: &Family, depth: usize) -> CliResult<(Value, bool)> {
    let system = rademacher_system(fam.unit(), fam)?;
    let conditions = verify_partans_conditions(&system, depth)?;
    if !(conditions.a() && conditions.b()) {
        return Ok((json!({ "conditions": to_json(&conditions) }), false));
    }
    let rep = build_representation(&system, depth)?;
    let cert = rep.cylinder_certificate(depth.min(4))?;
    let passed = conditions.all_pass() && cert.holds();
    Ok((json!({ "conditions": to_json(&conditions), "space": to_json(&rep.space), "cylinders": to_json(&cert) }), passed))
}

fn represent(cfg: &RunConfig) -> CliResult<bool> {
    let fam = cfg.family()?;
    let depth = cfg.depth(fam.len(), 10)?;
    let (value, passed) = represent_value(&fam, depth)?;
    let text = match value.get("cylinders") {
        Some(c) => format!(
            "{} outcomes at depth {depth}; {} cylinders checked, {} failures; conditions pass: {passed}\n",
            1u64 << depth,
            c["checked"],
            c["failures"].as_array().map_or(0, Vec::len)
        ),
        None => format!("conditions (a)/(b) fail at depth {depth}\n"),
    };
    emit(cfg, text, &value)?;
    Ok(passed)
}

fn examples(cfg: &RunConfig) -> CliResult<bool> {
    if cfg.example.is_some() {
        let fam = cfg.family()?;
        let value = to_json(&fam.to_file());
        emit(cfg, pretty(&value), &value)?;
        return Ok(true);
    }
    let text: String = EXAMPLES.iter().map(|(n, d)| format!("{n:<10} {d}\n")).collect();
    let value = Value::Array(EXAMPLES.iter().map(|(n, d)| json!({ "name": n, "description": d })).collect());
    emit(cfg, text, &value)?;
    Ok(true)
}

struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
    passed: bool,
}

impl Artifacts {
    fn json(&mut self, name: &str, value: &Value) -> CliResult<()> {
        self.text(name, &pretty(value))
    }

    fn text(&mut self, name: &str, contents: &str) -> CliResult<()> {
        write(&self.dir.join(name), contents)?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Writes `section` or, on a library failure, an error record.
    fn section(&mut self, name: &str, section: CliResult<(Value, bool)>) -> CliResult<()> {
        match section {
            Ok((value, ok)) => {
                self.passed &= ok;
                self.json(name, &value)
            }
            Err(CliError::Lib(e)) if !matches!(e, mal::Error::BudgetExceeded { .. }) => {
                self.passed = false;
                self.json(name, &json!({ "error": e.to_string() }))
            }
            Err(e) => Err(e),
        }
    }
}

fn report(cfg: &RunConfig) -> CliResult<bool> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("mal-report"));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut art = Artifacts { dir, written: Vec::new(), passed: true };
    match (cfg.family.is_none()).then(|| cfg.example_name()) {
        Some("nonsigma") => nonsigma_report(cfg, &mut art)?,
        Some("crushed") => {
            let gamma = cfg.params()?.gamma.unwrap_or_else(|| rat(1, 3));
            let stage = cfg.stage.unwrap_or(6);
            let ext = crushed_extension_stage(&gamma, stage, cfg.n.unwrap_or(stage))?;
            let value = json!({
                "stage": to_json(&ext.stage),
                "depth": ext.depth,
                "invariants": to_json(&ext.invariants),
                "witnesses": ext.witnesses.len(),
            });
            art.section("crushed.json", Ok((value, ext.holds())))?;
        }
        _ => family_report(cfg, &mut art)?,
    }
    let summary = json!({ "passed": art.passed, "artifacts": art.written });
    print!("{}", match cfg.format {
        Format::Json => pretty(&summary),
        Format::Text => format!("wrote {} to {}; passed: {}\n", art.written.join(", "), art.dir.display(), art.passed),
    });
    Ok(art.passed)
}

fn nonsigma_report(cfg: &RunConfig, art: &mut Artifacts) -> CliResult<()> {
    let m = cfg.m.unwrap_or(20);
    let chain = non_sigma_additive_chain(m)?;
    let half = rat(1, 2);
    let mut ok = true;
    let rows: Vec<Value> = chain
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let t = i as u64 + 1;
            let (mu, bound) = (x.measure().to_rational(), ledger_bound(t));
            ok &= mu > half && mu >= bound;
            json!({ "t": t, "measure": mu.to_string(), "ledger_bound": bound.to_string(), "above_half": mu > half })
        })
        .collect();
    // Seeded random nonzero candidates, each beaten by the refuter.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut refuted = Vec::new();
    for _ in 0..10 {
        let level = rng.gen_range(0..=4u32);
        let z = DyadicSet::from_cells(level, [rng.gen_range(0..1u64 << level)])?;
        let t = refute_lower_bound(&z)?;
        let beaten = !z.leq(&mal::family::chain_element(t)?);
        ok &= beaten;
        refuted.push(json!({ "z": to_json(&Element::from(z)), "t": t, "beaten": beaten }));
    }
    art.section("nonsigma.json", Ok((json!({ "chain": rows, "refuter": refuted }), ok)))
}

fn family_report(cfg: &RunConfig, art: &mut Artifacts) -> CliResult<()> {
    let fam = cfg.family()?;
    let depth = cfg.depth(fam.len(), 8)?;
    let props = cfg.properties()?;
    art.section(
        "properties.json",
        verify_family(&fam, depth).map_err(Into::into).map(|r| (to_json(&r), r.passes(&props))),
    )?;
    let mdepth = depth.min(6);
    art.section("measures.json", particle_table(&fam, mdepth).map(|rows| (json!({ "depth": mdepth, "particles": rows }), true)))?;
    let hd = haar_depth(cfg, &fam, 6)?;
    let haar = sample_step(&fam, hd, cfg.seed).and_then(|x| {
        let (rows, orthogonal, exact) = haar_table(&fam, hd, &x)?;
        Ok((json!({ "depth": hd, "orthogonal": orthogonal, "exact": exact, "rows": rows }), orthogonal && exact))
    });
    art.section("haar.json", haar)?;
    let tol = cfg.tolerance()?;
    let sample = sample_step(&fam, mdepth, cfg.seed);
    art.section("integrals.json", sample.as_ref().map_err(|e| CliError::Usage(e.to_string())).and_then(|x| Ok((integrals_of(x, &fam, &tol)?, true))))?;
    if let (Ok(x), Element::Dyadic(_)) = (&sample, fam.unit()) {
        art.text("step.csv", &x.to_csv(mdepth as u32)?)?;
    }
    art.section("independence.json", represent_value(&fam, depth))?;
    if cfg.example_name() == "ssjhd" && cfg.family.is_none() {
        let stage = cfg.stage.or(cfg.n).unwrap_or(10);
        let mut z = DyadicSet::empty();
        let mut chain = Vec::new();
        for _ in 0..5 {
            z = ssjhd_lower_bound_refuter(stage, &z)?;
            chain.push(z.max_point().unwrap_or_else(DyadicRational::zero).to_string());
        }
        art.section("ssjhd.json", Ok((json!({ "stage": stage, "lower_bound_tops": chain }), true)))?;
    }
    Ok(())
}
