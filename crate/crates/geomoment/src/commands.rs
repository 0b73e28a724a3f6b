//! The subcommands, as functions from validated arguments to output text
//! and an exit code.

use std::path::{Path, PathBuf};

use geomoment_core::invariants::{self, eigen_variables, generate_invariants, jacobian_rank, random_point, reference_point};
use geomoment_core::moments::{central_moments, normalized_moments, raw_moments};
use geomoment_core::selfcheck::run_self_check;
use geomoment_core::sl2::{self, OrderSet};
use geomoment_core::verify::invariance_report;
use geomoment_core::{MomentKind, NamedInvariant, PointCloud, Polynomial, TemplateLibrary, TemplateSet};
use serde_json::{Map, Value};

use crate::error::{exit, AppError, Result};
use crate::input::{load_cloud, parse_point_csv};
use crate::json::{invariant_to_value, polynomial_to_value, report_to_value, tensor_to_value};
use crate::text;

pub const SAMPLE_CLOUD: &str = include_str!("../data/sample_cloud.csv");

/// What a command prints to stdout, and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: exit::OK }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

fn pretty_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

fn check_set(set: TemplateSet) -> Result<()> {
    if set == TemplateSet::Binary {
        return Err(AppError::Usage("--set must be polynomial or rational".into()));
    }
    Ok(())
}

/// Invariants with `η` variable names.
fn eta_invariants(order: u32, set: TemplateSet) -> Result<Vec<NamedInvariant>> {
    check_set(set)?;
    if !(2..=3).contains(&order) {
        return Err(geomoment_core::Error::UnsupportedGenerationOrder(order).into());
    }
    Ok(generate_invariants(order, set)?
        .into_iter()
        .map(|inv| NamedInvariant { polynomial: invariants::to_eta_names(&inv.polynomial), ..inv })
        .collect())
}

pub fn gen(order: u32, set: TemplateSet, format: Format) -> Result<Output> {
    let invs = eta_invariants(order, set)?;
    Ok(Output::ok(match format {
        Format::Json => pretty_json(&Value::Array(invs.iter().map(invariant_to_value).collect())),
        Format::Text => invs
            .iter()
            .map(|i| format!("{} (order {}, degree {}) = {}\n", i.name, i.order, i.degree, text::polynomial(&i.polynomial)))
            .collect(),
    }))
}

fn cloud_from(input: Option<&PathBuf>) -> Result<PointCloud> {
    match input {
        Some(p) => load_cloud(p),
        None => parse_point_csv(SAMPLE_CLOUD, "<bundled sample_cloud.csv>"),
    }
}

pub fn moments(input: &Path, max_order: u32, kind: MomentKind) -> Result<Output> {
    let cloud = load_cloud(input)?;
    let raw = raw_moments(&cloud, max_order)?;
    let tensor = match kind {
        MomentKind::Raw => raw,
        MomentKind::Central => central_moments(&raw)?,
        MomentKind::Normalized => normalized_moments(&central_moments(&raw)?)?,
    };
    Ok(Output::ok(pretty_json(&tensor_to_value(&tensor))))
}

pub fn eval(input: &Path, order: u32, set: TemplateSet) -> Result<Output> {
    let invs = eta_invariants(order, set)?;
    let cloud = load_cloud(input)?;
    let eta = normalized_moments(&central_moments(&raw_moments(&cloud, order)?)?)?;
    let mut values = Map::new();
    for inv in &invs {
        values.insert(inv.name.clone(), Value::from(geomoment_core::moments::evaluate_invariant(inv, &eta)?));
    }
    Ok(Output::ok(pretty_json(&Value::Object(values))))
}

/// Runs the invariance harness over the order-2 set and both order-3 sets.
pub fn verify(input: Option<&PathBuf>, rotations: usize, seed: u64, tol: f64) -> Result<Output> {
    if !(tol > 0.0) {
        return Err(AppError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let cloud = cloud_from(input)?;
    let mut invs = generate_invariants(2, TemplateSet::Polynomial)?;
    invs.extend(generate_invariants(3, TemplateSet::Polynomial)?);
    invs.extend(generate_invariants(3, TemplateSet::Rational)?);
    let report = invariance_report(&cloud, &invs, rotations, tol, seed)?;
    if report.degenerate {
        eprintln!("warning: the cloud is degenerate (fewer than four points or nearly coplanar)");
    }
    let code = if report.all_passed() { exit::OK } else { exit::VERIFICATION_FAILED };
    Ok(Output { stdout: pretty_json(&report_to_value(&report)), code })
}

pub fn count(order: u32, poincare: Option<usize>) -> Result<Output> {
    if order < 2 {
        return Err(AppError::Usage(format!("--order must be at least 2, got {order}")));
    }
    if poincare.is_some() && order != 3 {
        return Err(AppError::Usage("--poincare is available only with --order 3".into()));
    }
    let mut out = format!("{}\n", invariants::generator_count(order)?);
    if let Some(n) = poincare {
        let coeffs: Vec<String> = invariants::poincare_coefficients(n).iter().map(ToString::to_string).collect();
        out.push_str(&coeffs.join(" "));
        out.push('\n');
    }
    Ok(Output::ok(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointChoice {
    Reference,
    Random,
}

pub fn independence(point: PointChoice, seed: u64) -> Result<Output> {
    let lib = TemplateLibrary::builtin();
    let bodies: Vec<Polynomial> = lib.set(TemplateSet::Rational).map(|t| t.body.clone()).collect();
    let vars = eigen_variables();
    let at = match point {
        PointChoice::Reference => reference_point(),
        PointChoice::Random => random_point(&vars, seed),
    };
    let rank = jacobian_rank(&bodies, &vars, &at)?;
    let point_json: Map<String, Value> = vars.iter().map(|v| (v.to_string(), Value::from(at[v].to_string()))).collect();
    let mut m = Map::new();
    m.insert("point_kind".into(), Value::from(if point == PointChoice::Reference { "reference" } else { "random" }));
    if point == PointChoice::Random {
        m.insert("seed".into(), Value::from(seed));
    }
    m.insert("invariants".into(), Value::from(bodies.len()));
    m.insert("rank".into(), Value::from(rank));
    m.insert("point".into(), Value::Object(point_json));
    Ok(Output::ok(pretty_json(&Value::Object(m))))
}

pub fn decompose(orders: &[u32], format: Format) -> Result<Output> {
    let set = OrderSet::new(orders.iter().copied())?;
    let dec = sl2::decompose(&set)?;
    Ok(Output::ok(match format {
        Format::Text => {
            let mut s = format!("{dec}\n");
            for (order, entry) in &dec.entries {
                for z in &entry.lowest_weight_basis {
                    s.push_str(&format!("V{order}: {}\n", text::polynomial(z)));
                }
            }
            s
        }
        Format::Json => {
            let modules: Vec<Value> = dec
                .entries
                .iter()
                .map(|(order, e)| {
                    serde_json::json!({
                        "order": order,
                        "multiplicity": e.multiplicity,
                        "lowest_weight_vectors": e.lowest_weight_basis.iter().map(polynomial_to_value).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty_json(&serde_json::json!({ "orders": orders, "summary": dec.to_string(), "modules": modules }))
        }
    }))
}

pub fn self_check() -> Result<Output> {
    let report = run_self_check();
    let mut s: String = report.checks.iter().map(|c| format!("{c}\n")).collect();
    let failed = report.failures().count();
    s.push_str(&format!("{} checks, {failed} failed\n", report.checks.len()));
    Ok(Output { stdout: s, code: if failed == 0 { exit::OK } else { exit::VERIFICATION_FAILED } })
}
