//! Scenario files, the built-in example corpus, and reports.

pub mod error;
pub mod parse;
pub mod report;
pub mod scenario;

use crformal_core::context::Coords;
use crformal_core::fixtures::example_fixtures;
use crformal_core::local::DEFAULT_CUTOFF;
use crformal_core::manifold::Manifold;
use crformal_core::mapping::{AnalysisSettings, FormalMapPair};
use crformal_core::series::{Precision, Series};

pub use error::InputError;
use report::{series_strings, Header, ManifoldReport, MapReport, ReflectionEntry, Report, Summary};
use scenario::{build_manifold, build_map, Request, Scenario};

pub const DEFAULT_TRUNCATION: u32 = 8;
pub const DEFAULT_SEED: u64 = 0;

/// Command-line overrides; `None` falls back to the scenario, then to the
/// defaults.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub truncation: Option<u32>,
    pub cutoff: Option<u32>,
    pub seed: Option<u64>,
    pub audit: bool,
    pub fixtures: bool,
}

struct Plan {
    k: u32,
    settings: AnalysisSettings,
    requests: Vec<Request>,
}

impl Plan {
    fn wants(&self, r: Request) -> bool {
        self.requests.contains(&r)
    }
}

fn core_err(path: &str) -> impl Fn(crformal_core::error::Error) -> InputError + '_ {
    move |e| InputError::Core {
        path: path.into(),
        error: e,
    }
}

fn precision_label(v: &[Series]) -> String {
    v.iter()
        .fold(Precision::Exact, |p, s| p.min(s.precision()))
        .to_string()
}

fn manifold_report(
    name: &str,
    m: &Manifold,
    change: Option<&[Series]>,
    plan: &Plan,
) -> Result<ManifoldReport, InputError> {
    let path = format!("manifolds.{name}");
    let err = core_err(&path);
    Ok(ManifoldReport {
        name: name.into(),
        n: m.n(),
        d: m.d(),
        q: series_strings(m.q()),
        precision: precision_label(m.q()),
        change: change.map(series_strings),
        reality: m.reality().clone(),
        normality: m.normality().clone(),
        finite_type: if plan.wants(Request::FiniteType) {
            Some(m.finite_type(&plan.settings.rank).map_err(&err)?)
        } else {
            None
        },
        essential_type: if plan.wants(Request::EssentialType) {
            Some(m.essential_type(plan.settings.cutoff).map_err(&err)?)
        } else {
            None
        },
        finitely_nondegenerate: if plan.wants(Request::FinitelyNondegenerate) {
            let order = plan.settings.nondegeneracy_order.unwrap_or(plan.k.saturating_sub(1));
            Some(m.finitely_nondegenerate(order).map_err(&err)?)
        } else {
            None
        },
    })
}

fn map_report(
    name: &str,
    description: Option<String>,
    source: &str,
    target: &str,
    pair: &FormalMapPair,
    plan: &Plan,
) -> Result<MapReport, InputError> {
    let path = format!("maps.{name}");
    let err = core_err(&path);
    let predicates = if plan.wants(Request::Predicates) {
        Some(pair.predicates(&plan.settings).map_err(&err)?)
    } else {
        None
    };
    let mut reflection = Vec::new();
    if plan.wants(Request::Reflection) && pair.verified() {
        for k in 1..=pair.source().segre_bound() {
            reflection.push(ReflectionEntry {
                k,
                verdict: pair.reflection_identity_residual(k).map_err(&err)?,
            });
        }
    }
    let (audit, audit_not_run) = if !plan.wants(Request::Audit) {
        (None, None)
    } else if !pair.verified() {
        (None, Some(format!("the mapping residual is not certified zero ({})", pair.maps_into())))
    } else {
        (Some(pair.theorem_audit(&plan.settings).map_err(&err)?.checks), None)
    };
    Ok(MapReport {
        name: name.into(),
        description,
        source: source.into(),
        target: target.into(),
        f: series_strings(pair.f()),
        g: series_strings(pair.g()),
        maps_into: pair.maps_into().clone(),
        predicates,
        reflection,
        audit,
        audit_not_run,
    })
}

/// Runs a scenario and/or the built-in corpus.
pub fn run(scenario: Option<&Scenario>, opts: &RunOptions) -> Result<Report, InputError> {
    if scenario.is_none() && !opts.fixtures {
        return Err(InputError::NothingToDo);
    }
    let k = opts
        .truncation
        .or(scenario.and_then(|s| s.truncation))
        .unwrap_or(DEFAULT_TRUNCATION);
    let cutoff = opts.cutoff.or(scenario.and_then(|s| s.cutoff)).unwrap_or(DEFAULT_CUTOFF);
    let seed = opts.seed.or(scenario.and_then(|s| s.seed)).unwrap_or(DEFAULT_SEED);
    if k < 2 {
        return Err(InputError::Schema {
            path: "truncation".into(),
            message: "truncation must be at least 2".into(),
        });
    }
    let mut requests: Vec<Request> = match scenario {
        Some(s) if !s.requests.is_empty() => s.requests.clone(),
        _ => Request::DEFAULT.to_vec(),
    };
    if opts.audit {
        requests.push(Request::Audit);
    }
    if opts.fixtures {
        requests.push(Request::Predicates);
        requests.push(Request::Reflection);
    }
    requests.sort();
    requests.dedup();
    let plan = Plan {
        k,
        settings: AnalysisSettings::default().with_seed(seed).with_cutoff(cutoff),
        requests,
    };

    let mut manifolds = Vec::new();
    let mut maps = Vec::new();
    if let Some(s) = scenario {
        let c = Coords::new(s.n, s.d);
        let built: Vec<_> = s
            .manifolds
            .iter()
            .map(|(name, spec)| build_manifold(&c, name, spec, k))
            .collect::<Result<_, _>>()?;
        for b in &built {
            manifolds.push(manifold_report(&b.name, &b.manifold, b.change.as_deref(), &plan)?);
        }
        for (name, spec) in &s.maps {
            let m = build_map(&c, name, spec, &built, k)?;
            maps.push(map_report(&m.name, None, &m.source, &m.target, &m.pair, &plan)?);
        }
    }
    if opts.fixtures {
        let fixtures = example_fixtures(k).map_err(core_err("fixtures"))?;
        for f in fixtures {
            let (src, tgt) = (format!("{}/source", f.name), format!("{}/target", f.name));
            let pair = &f.pair;
            for (label, m) in [(&src, pair.source()), (&tgt, pair.target())] {
                manifolds.push(manifold_report(label, m, None, &plan)?);
            }
            maps.push(map_report(&f.name, Some(f.description.clone()), &src, &tgt, pair, &plan)?);
        }
    }

    let mut report = Report {
        header: Header {
            tool: "crformal",
            version: env!("CARGO_PKG_VERSION"),
            n: scenario.map(|s| s.n),
            d: scenario.map(|s| s.d),
            truncation: k,
            cutoff,
            seed,
            requests: plan.requests.clone(),
            fixtures: opts.fixtures,
        },
        manifolds,
        maps,
        summary: Summary::default(),
    };
    report.tally();
    Ok(report)
}
