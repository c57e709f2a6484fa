use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use blockalg::algebra::{verify_algebra_axioms, vir_consistency, AlgebraWindow, ElementJson};
use blockalg::lemma_lab::{run_suite, MatchStatus, SuiteConfig};
use blockalg::modules::{
    build_window, check_module_axioms, classify_window, extend_trivially, extension_space, find_intertwiner,
    irreducible_verdict, spanning_check_m, Family, IntermediateSpec, ModuleJson, WindowedModule,
};
use blockalg::scalar::{format_rational, parse_rational};
use blockalg::verma::{positive_generation, quasifinite_report, vector_terms, VermaModule, WeightFunctional};
use blockalg::{AlgebraElement, AlgebraVariant, Rational};
use clap::Subcommand;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Outcome, Report};

#[derive(Debug, Subcommand)]
pub enum ModuleAction {
    /// Check the module axioms, as a Virasoro module and trivially extended.
    Axioms,
    /// Brute-force irreducibility against the classical criterion.
    Irreducible,
    /// Irreducibility over the configured (a, b) grid.
    Grid,
    /// Search for a graded isomorphism to another intermediate-series module.
    Intertwiner {
        #[arg(long, default_value = "Aab")]
        to_family: String,
        #[arg(long, allow_hyphen_values = true)]
        to_a: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        to_b: String,
    },
    /// Solve for compatible positive-level actions.
    Extension,
    /// Check that the window is spanned by V_{-2..2} and its Virasoro images.
    Spanning,
    /// Classify the trivially extended window.
    Classify,
    /// Print the window as module JSON.
    Dump,
}

#[derive(Debug, Subcommand)]
pub enum VermaAction {
    /// Weight-space dimensions for depths 0..=depth.
    Dims,
    /// Singular vectors at depths 1..=depth.
    Singular,
    /// The truncated module as a window, with its classification.
    Window,
}

fn rational(field: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| anyhow!("{field}: {e}"))
}

fn spec(family: &str, a: &str, b: &str) -> Result<IntermediateSpec> {
    let family = Family::from_str(family).map_err(|e| anyhow!("family: {e}"))?;
    let a = rational("a", a)?;
    Ok(match family {
        Family::Aab => IntermediateSpec::aab(a, rational("b", b)?),
        Family::Aa => IntermediateSpec::a_of(a),
        Family::Ba => IntermediateSpec::b_of(a),
    })
}

fn variant(text: &str) -> Result<AlgebraVariant> {
    AlgebraVariant::from_str(text).map_err(|e| anyhow!("variant: {e}"))
}

/// An operand is either a single term `{"alpha", "level", "coeff"}` or an
/// element `{"terms": [...], "central": ...}`.
fn operand(name: &str, text: &str, v: AlgebraVariant) -> Result<AlgebraElement> {
    let mut value: Value = serde_json::from_str(text).with_context(|| format!("{name}: invalid JSON"))?;
    let obj = value.as_object_mut().ok_or_else(|| anyhow!("{name}: expected a JSON object"))?;
    if !obj.contains_key("terms") && !obj.contains_key("central") {
        let term = Value::Object(std::mem::take(obj));
        obj.insert("terms".into(), json!([term]));
    }
    obj.entry("variant").or_insert_with(|| json!(v.to_string()));
    let parsed: ElementJson =
        serde_json::from_value(value).with_context(|| format!("{name}: malformed element"))?;
    AlgebraElement::try_from(parsed).map_err(|e| anyhow!("{name}: {e}"))
}

pub fn bracket(cfg: &RunConfig, x: &str, y: &str) -> Result<Report> {
    let v = variant(&cfg.variant)?;
    let (x, y) = (operand("x", x, v)?, operand("y", y, v)?);
    let z = x.bracket(&y)?;
    let mut r = Report::new("bracket", json!({"variant": v.to_string()}));
    r.row(format!("[{x}, {y}]"), Outcome::Info, z.to_string());
    r.set("x", ElementJson::from(&x))?;
    r.set("y", ElementJson::from(&y))?;
    r.set("result", ElementJson::from(&z))?;
    r.set("text", z.to_string())?;
    Ok(r)
}

pub fn axioms(cfg: &RunConfig) -> Result<Report> {
    let v = variant(&cfg.variant)?;
    let window = AlgebraWindow::new(cfg.degree_bound, cfg.level_cap);
    let mut r = Report::new(
        "axioms",
        json!({"variant": v.to_string(), "degree_bound": cfg.degree_bound, "level_cap": cfg.level_cap}),
    );
    let rep = verify_algebra_axioms::<Rational, _>(&v, window);
    r.check(
        format!("axioms {v}"),
        rep.passed(),
        format!(
            "{} pairs, {} triples, {} violations",
            rep.pairs_checked,
            rep.triples_checked,
            rep.violations.len()
        ),
    );
    r.set("axioms", &rep)?;
    if v == AlgebraVariant::BlockB {
        let vc = vir_consistency(cfg.degree_bound);
        r.check(
            "virasoro consistency",
            vc.passed(),
            format!("c0 = {}", vc.c0.clone().unwrap_or_else(|| "none".into())),
        );
        r.set("virasoro", &vc)?;
    }
    Ok(r)
}

pub fn module(cfg: &RunConfig, family: &str, a: &str, b: &str, action: ModuleAction) -> Result<Report> {
    let s = spec(family, a, b)?;
    let (lo, hi) = cfg.range;
    let m = build_window(&s, lo, hi);
    let mut r =
        Report::new("module", json!({"module": s.label(), "range": [lo, hi], "level_cap": cfg.level_cap}));
    match action {
        ModuleAction::Axioms => {
            let deg = 4.min(m.width());
            let vir = check_module_axioms(&m, AlgebraWindow::new(deg, 0));
            r.check("virasoro axioms", vir.passed(), format!("{} violations", vir.violations.len()));
            let ext = extend_trivially(&m, cfg.level_cap);
            let full = check_module_axioms(&ext, AlgebraWindow::new(deg, cfg.level_cap));
            r.check("extended axioms", full.passed(), format!("{} violations", full.violations.len()));
            r.set("virasoro", &vir)?;
            r.set("extended", &full)?;
        }
        ModuleAction::Irreducible => {
            let v = irreducible_verdict(&s, lo, hi);
            r.check(
                format!("irreducible {}", s.label()),
                v.agree(),
                format!("bruteforce={} criterion={}", v.bruteforce, v.criterion),
            );
            r.set("verdict", &v)?;
        }
        ModuleAction::Grid => {
            let mut all = Vec::new();
            for a in &cfg.a_grid {
                for b in &cfg.b_grid {
                    let s = spec("Aab", a, b)?;
                    let v = irreducible_verdict(&s, lo, hi);
                    r.check(
                        format!("irreducible {}", s.label()),
                        v.agree(),
                        format!("bruteforce={} criterion={}", v.bruteforce, v.criterion),
                    );
                    all.push(v);
                }
            }
            r.set("verdicts", &all)?;
        }
        ModuleAction::Intertwiner { to_family, to_a, to_b } => {
            let t = spec(&to_family, &to_a, &to_b)?;
            let target = build_window(&t, lo, hi);
            let found = find_intertwiner(&m, &target)?;
            let label = format!("{} -> {}", s.label(), t.label());
            r.row(
                format!("intertwiner {label}"),
                Outcome::Info,
                if found.is_some() { "invertible map found" } else { "none" },
            );
            r.set("found", found.is_some())?;
            r.set("map", &found)?;
        }
        ModuleAction::Extension => {
            let ext = extension_space(&m, cfg.level_cap);
            let expect_trivial = s.irreducible_by_criterion();
            let summary = if ext.inconclusive {
                "inconclusive".to_string()
            } else {
                format!("solution space dimension {}", ext.dimension())
            };
            if expect_trivial {
                r.check("extension space", ext.is_trivial(), summary);
            } else {
                r.row("extension space", Outcome::Info, summary);
            }
            r.set("extension", &ext)?;
        }
        ModuleAction::Spanning => {
            let sp = spanning_check_m(&m)?;
            r.check("spanning", sp.holds, format!("deficient indices {:?}", sp.deficient));
            r.set("spanning", &sp)?;
        }
        ModuleAction::Classify => {
            let c = classify_window(&extend_trivially(&m, cfg.level_cap));
            r.row("classification", Outcome::Info, c.label());
            r.set("classification", &c)?;
        }
        ModuleAction::Dump => {
            r.row("module", Outcome::Info, format!("{} on [{lo}, {hi}]", s.label()));
            r.set("module", ModuleJson::from(&m))?;
        }
    }
    Ok(r)
}

fn load_weight(cfg: &RunConfig, n: i64) -> Result<WeightFunctional> {
    let w = match &cfg.lambda {
        None => WeightFunctional::zero(n.max(0) as usize),
        Some(path) => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing weight {}", path.display()))?
        }
    };
    if w.level_cap() != n {
        bail!("lambda: expected {} values for n = {n}, got {}", n + 1, w.lambda.len());
    }
    Ok(w)
}

pub fn verma(cfg: &RunConfig, n: i64, depth: i64, action: VermaAction) -> Result<Report> {
    if n < 0 || depth < 0 {
        bail!("n and depth must be nonnegative");
    }
    let weight = load_weight(cfg, n)?;
    let mut r = Report::new(
        "verma",
        json!({
            "n": n,
            "depth": depth,
            "lambda": weight.lambda.iter().map(format_rational).collect::<Vec<_>>(),
            "c": format_rational(&weight.c),
        }),
    );
    match action {
        VermaAction::Dims => {
            let q = quasifinite_report(n, depth);
            let tail: Vec<String> = q.dims.iter().skip(1).map(usize::to_string).collect();
            r.row("dims", Outcome::Info, tail.join(", "));
            r.set("dims", &q)?;
        }
        VermaAction::Singular => {
            let module = VermaModule::new(weight)?;
            let (closure, full) = positive_generation(n, depth.max(1) + 1)?;
            r.check(
                "positive generators",
                full,
                format!("generate degrees 1..={} (closure dim {})", depth.max(1) + 1, closure.dimension),
            );
            let mut per_depth = Vec::new();
            for d in 1..=depth {
                let sv = module.singular_vectors(d)?;
                let verified = sv.iter().all(|v| module.annihilated_by_positive(v, d));
                r.check(format!("singular depth {d}"), verified, format!("{} vectors", sv.len()));
                per_depth.push(json!({
                    "depth": d,
                    "vectors": sv.iter().map(vector_terms).collect::<Vec<_>>(),
                }));
            }
            r.set("singular", per_depth)?;
        }
        VermaAction::Window => {
            let module = VermaModule::new(weight)?;
            let w = module.window(depth)?;
            let c = classify_window(&w);
            r.row("classification", Outcome::Info, c.label());
            r.set("classification", &c)?;
            r.set("module", ModuleJson::from(&w))?;
        }
    }
    Ok(r)
}

pub fn lemmas(cfg: &RunConfig, only: Option<&str>) -> Result<Report> {
    let suite = SuiteConfig::default();
    let mut r = Report::new("lemmas", json!({"suite": &suite, "only": only, "strict": cfg.strict}));
    let reports: Vec<_> =
        run_suite(&suite)?.into_iter().filter(|rep| only.is_none_or(|p| rep.claim.starts_with(p))).collect();
    for rep in &reports {
        let outcome = match rep.status {
            MatchStatus::Exact | MatchStatus::Normalized => Outcome::Pass,
            MatchStatus::DiscrepancyRecorded | MatchStatus::Inconclusive => Outcome::Discrepancy,
            MatchStatus::Violated => Outcome::Fail,
        };
        let status = serde_json::to_value(rep.status)?;
        r.row(rep.claim.clone(), outcome, status.as_str().unwrap_or_default().to_string());
    }
    r.set("reports", &reports)?;
    Ok(r)
}

pub fn classify(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: ModuleJson =
        serde_json::from_str(&text).with_context(|| format!("parsing module {}", path.display()))?;
    let m = WindowedModule::try_from(parsed).map_err(|e| anyhow!("module {}: {e}", path.display()))?;
    let c = classify_window(&m);
    let mut r = Report::new("classify", json!({"module": path.file_name().map(|f| f.to_string_lossy())}));
    r.row("classification", Outcome::Info, c.label());
    r.set("classification", &c)?;
    Ok(r)
}
