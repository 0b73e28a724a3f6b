//! The exact symbolic check suite: operator relations, module structure,
//! template invariance, and the counting results, each reported with a
//! counterexample on failure.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::gaussian::GaussianRational;
use crate::invariants::{
    self, annihilation_witness, degree_one_invariant, eigen_variables, generate_with, jacobian_rank, realize,
    reference_point, Realization,
};
use crate::parse::parse_polynomial;
use crate::poly::{Monomial, Polynomial};
use crate::sl2::{self, Derivation, OrderSet};
use crate::templates::{reference, reference_group, InvariantTemplate, TemplateLibrary, TemplateSet};
use crate::variable::Variable;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<Polynomial>,
}

impl CheckResult {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed: true, detail: detail.into(), counterexample: None }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>, counterexample: Option<Polynomial>) -> Self {
        Self { name: name.into(), passed: false, detail: detail.into(), counterexample }
    }

    fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail, None)
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n    counterexample: {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SelfCheckReport {
    pub checks: Vec<CheckResult>,
}

impl SelfCheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct SelfCheckConfig {
    pub templates: TemplateLibrary,
    /// Orders for the operator, module, and Laplace checks.
    pub orders: OrderSet,
    /// Closed-form multiplicities are compared for `{2..d}`, `d ≤` this.
    pub closed_form_up_to: u32,
}

impl Default for SelfCheckConfig {
    fn default() -> Self {
        Self {
            templates: TemplateLibrary::builtin(),
            orders: OrderSet::up_to(4).expect("valid"),
            closed_form_up_to: 8,
        }
    }
}

pub fn run_self_check() -> SelfCheckReport {
    run_self_check_with(&SelfCheckConfig::default())
}

type Section = fn(&SelfCheckConfig, &mut Vec<CheckResult>) -> Result<()>;

/// Runs every check; errors inside a check become failing entries.
pub fn run_self_check_with(cfg: &SelfCheckConfig) -> SelfCheckReport {
    let mut report = SelfCheckReport::default();
    let sections: [(&str, Section); 9] = [
        ("operators", operators),
        ("standard modules", standard_modules),
        ("decomposition", decomposition),
        ("laplace", laplace),
        ("degree one", degree_one),
        ("templates", templates),
        ("displays", displays),
        ("independence", independence),
        ("counting", counting),
    ];
    for (name, section) in sections {
        if let Err(e) = section(cfg, &mut report.checks) {
            report.checks.push(CheckResult::fail(name, format!("aborted: {e}"), None));
        }
    }
    report
}

fn operators(cfg: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let report = sl2::check_commutators(&cfg.orders)?;
    for c in report.checks {
        let detail = format!("on every basis variable of orders {}", cfg.orders);
        match c.counterexample {
            None => out.push(CheckResult::pass(c.relation, detail)),
            Some((v, residual)) => {
                out.push(CheckResult::fail(c.relation, format!("{detail}; fails on {v}, residual shown"), Some(residual)))
            }
        }
    }
    // The sum of squares of E1..E3 is the Casimir up to the factor -2; this
    // pins the factor on a single vector with known eigenvalue.
    let x = parse_polynomial("a_0_1_1").expect("literal");
    let casimir = sl2::apply(Derivation::Laplace, &x)?;
    let mut squares = Polynomial::zero();
    for e in [Derivation::E1, Derivation::E2, Derivation::E3] {
        squares = &squares + &sl2::apply_power(e, &x, 2)?;
    }
    let ok = casimir == x.scale(&GaussianRational::from_integer(12))
        && squares == x.scale(&GaussianRational::from_integer(-6));
    out.push(CheckResult::from_bool(
        "L(a_0_1_1) = 12 a_0_1_1, (E1^2+E2^2+E3^2)(a_0_1_1) = -6 a_0_1_1",
        ok,
        format!("L gives {casimir}, E1^2+E2^2+E3^2 gives {squares}"),
    ));
    let sign = sl2::weight_sign();
    out.push(CheckResult::from_bool(
        "lowest-weight sign",
        sign == -1,
        format!("lowest-weight vectors satisfy H(z) = {}s z", if sign < 0 { "-" } else { "+" }),
    ));
    Ok(())
}

fn standard_modules(cfg: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let dec = sl2::decompose(&cfg.orders)?;
    let mut failure: Option<(String, Polynomial)> = None;
    let mut count = 0;
    'outer: for (s, entry) in &dec.entries {
        let s = *s;
        for z in &entry.lowest_weight_basis {
            count += 1;
            let v = sl2::standard_basis(z, s)?;
            for k in 0..=s as usize {
                let dm = sl2::apply(Derivation::Dminus, &v[k])?;
                let dm_expected =
                    if k == 0 { Polynomial::zero() } else { v[k - 1].scale(&GaussianRational::from_integer(k as i64)) };
                let dp = sl2::apply(Derivation::Dplus, &v[k])?;
                let dp_expected = if k == s as usize {
                    Polynomial::zero()
                } else {
                    v[k + 1].scale(&GaussianRational::from_integer((s as usize - k) as i64))
                };
                let h = sl2::apply(Derivation::H, &v[k])?;
                let h_expected = v[k].scale(&GaussianRational::from_integer(2 * k as i64 - s as i64));
                for (what, got, want) in [("D-", dm, dm_expected), ("D+", dp, dp_expected), ("H", h, h_expected)] {
                    if got != want {
                        failure = Some((format!("{what} on v{k} of V{s} generated by {z}"), &got - &want));
                        break 'outer;
                    }
                }
            }
        }
    }
    let name = "standard module action D-(v_k) = k v_(k-1), D+(v_k) = (s-k) v_(k+1), H(v_k) = (2k-s) v_k";
    out.push(match failure {
        None => CheckResult::pass(name, format!("{count} lowest-weight vectors in {}", cfg.orders)),
        Some((d, c)) => CheckResult::fail(name, d, Some(c)),
    });
    Ok(())
}

fn decomposition(cfg: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let dec = sl2::decompose(&cfg.orders)?;
    out.push(CheckResult::pass(format!("decomposition of {}", cfg.orders), format!("{dec}")));
    for d in 2..=cfg.closed_form_up_to {
        let name = format!("closed-form multiplicities for U{d}");
        match sl2::decompose(&OrderSet::up_to(d)?) {
            Ok(dec) => out.push(CheckResult::pass(name, format!("{dec}"))),
            Err(e) => out.push(CheckResult::fail(name, format!("{e}"), None)),
        }
    }
    Ok(())
}

fn laplace(cfg: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let dec = sl2::decompose(&cfg.orders)?;
    let mut expected: BTreeMap<u64, usize> = BTreeMap::new();
    for (s, e) in &dec.entries {
        *expected.entry(sl2::laplace_eigenvalue(*s)).or_default() += e.multiplicity as usize * (*s as usize + 1);
    }
    let eig = sl2::laplace_eigenbasis(&cfg.orders)?;
    let found: BTreeMap<u64, usize> = eig.iter().map(|(l, b)| (*l, b.len())).collect();
    out.push(CheckResult::from_bool(
        "Laplace eigenspace dimensions",
        found == expected,
        format!("eigenvalue -> dimension {found:?}, from decomposition {expected:?}"),
    ));
    Ok(())
}

fn degree_one(_: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    for d in (2..=16).step_by(2) {
        let inv = degree_one_invariant(d)?;
        let name = format!("I{d} is annihilated");
        match annihilation_witness(&inv.polynomial)? {
            None => out.push(CheckResult::pass(name, format!("{} terms", inv.polynomial.len()))),
            Some((op, image)) => out.push(CheckResult::fail(name, format!("{op} does not vanish"), Some(image))),
        }
    }
    for b in reference_group("degree_one") {
        let d: u32 = b.name[1..].parse().expect("reference names are I<d>");
        let got = degree_one_invariant(d)?.polynomial;
        out.push(exact_match(&format!("I{d} matches the reference display"), &got, &b.body));
    }
    Ok(())
}

fn exact_match(name: &str, got: &Polynomial, want: &Polynomial) -> CheckResult {
    if got == want {
        CheckResult::pass(name, format!("{} terms", got.len()))
    } else {
        CheckResult::fail(name, String::from("difference shown"), Some(got - want))
    }
}

/// Standard-module action on template variables: `D+(v_k) = (s-k) v_(k+1)`,
/// `D-(v_k) = k v_(k-1)`, `H(v_k) = (2k-s) v_k`, where `s` is the order of
/// the variable's family.
fn standard_action(op: Derivation, p: &Polynomial) -> Option<Polynomial> {
    let mut images = BTreeMap::new();
    for v in p.variables() {
        let Variable::Template(f, k) = v else { return None };
        let s = f.module_order()?;
        let gi = |n: i64| GaussianRational::from_integer(n);
        let image = match op {
            Derivation::Dplus if k < s => Polynomial::var(Variable::template(f, k + 1)).scale(&gi((s - k) as i64)),
            Derivation::Dminus if k > 0 => Polynomial::var(Variable::template(f, k - 1)).scale(&gi(k as i64)),
            Derivation::H => Polynomial::var(v).scale(&gi(2 * k as i64 - s as i64)),
            Derivation::Dplus | Derivation::Dminus => Polynomial::zero(),
            _ => return None,
        };
        images.insert(v, image);
    }
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        for (v, _) in m.factors() {
            let (e, rest) = m.without_one(v).expect("factor");
            let coeff = c * &GaussianRational::from_integer(e as i64);
            for (n, a) in images[v].terms() {
                out.add_term(rest.mul(n), &coeff * a);
            }
        }
    }
    Some(out)
}

fn content_is_one(t: &InvariantTemplate) -> bool {
    let mut g = num_bigint::BigInt::zero();
    for (_, c) in t.body.terms() {
        g = g.gcd(&c.re().to_integer());
    }
    g.abs() == num_bigint::BigInt::from(1)
}

/// The realizations templates are substituted into, built once.
#[derive(Clone, Debug)]
pub struct TemplateRealizations {
    binary: Realization,
    order_three: Realization,
    eigen: Realization,
}

impl TemplateRealizations {
    pub fn new() -> Result<Self> {
        Ok(Self {
            binary: Realization::binary_quartic()?,
            order_three: Realization::order_three()?,
            eigen: Realization::eigenvectors()?,
        })
    }
}

fn templates(cfg: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let r = TemplateRealizations::new()?;
    for t in cfg.templates.iter() {
        out.extend(check_template(t, &r)?);
    }
    Ok(())
}

/// The per-template part of the self-check: coefficient content, joint
/// invariance in the standard modules, and annihilation once realized.
pub fn check_template(t: &InvariantTemplate, r: &TemplateRealizations) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    out.push(CheckResult::from_bool(
        format!("{} has coprime coefficients", t.name),
        content_is_one(t),
        String::from("integer coefficients with gcd 1"),
    ));
    if t.set != TemplateSet::Rational {
        let mut failure = None;
        for op in [Derivation::Dplus, Derivation::Dminus, Derivation::H] {
            match standard_action(op, &t.body) {
                Some(img) if img.is_zero() => {}
                Some(img) => {
                    failure = Some((op, img));
                    break;
                }
                None => {
                    failure = Some((op, Polynomial::zero()));
                    break;
                }
            }
        }
        let name = format!("{} is a joint invariant of the standard modules", t.name);
        out.push(match failure {
            None => CheckResult::pass(name, String::from("D+, D-, H annihilate")),
            Some((op, img)) => CheckResult::fail(name, format!("{op} does not vanish"), Some(img)),
        });
    }
    let r = match t.set {
        TemplateSet::Binary => &r.binary,
        TemplateSet::Polynomial => &r.order_three,
        TemplateSet::Rational => &r.eigen,
    };
    let realized = realize(t, r)?;
    let name = format!("{} realized in moments is annihilated by E1, E2, E3", t.name);
    out.push(match annihilation_witness(&realized)? {
        None if realized.is_zero() => CheckResult::fail(name, String::from("realizes to zero"), None),
        None => CheckResult::pass(name, format!("{} terms", realized.len())),
        Some((op, image)) => CheckResult::fail(name, format!("{op} does not vanish"), Some(image)),
    });
    if t.set != TemplateSet::Rational {
        out.push(CheckResult::from_bool(
            format!("{} realized is proportional to a real polynomial", t.name),
            invariants::normalize_real(&realized).is_ok(),
            String::from("complex scalar times real polynomial"),
        ));
    }
    Ok(out)
}

fn displays(cfg: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let order_two = generate_with(&cfg.templates, 2, TemplateSet::Polynomial)?;
    out.push(exact_match("I1 equals a_0_0_2 + a_0_2_0 + a_2_0_0", &order_two[0].polynomial, &reference("degree_one", "I2").expect("bundled")));
    for inv in &order_two[1..] {
        let want = reference("order_two", &inv.name).expect("bundled");
        out.push(exact_match(&format!("{} matches the reference display", inv.name), &inv.polynomial, &want));
    }
    let order_three = generate_with(&cfg.templates, 3, TemplateSet::Polynomial)?;
    for b in reference_group("order_three") {
        let got = order_three.iter().find(|i| i.name == b.name).map(|i| invariants::to_eta_names(&i.polynomial));
        out.push(exact_match(&format!("{} matches the reference display", b.name), &got.unwrap_or_default(), &b.body));
    }
    // The computed standard bases against the bundled realizations.
    for (group, r) in [("basis_t2", Realization::binary_quartic()?), ("basis_u3", Realization::order_three()?)] {
        let fixed = Realization::from_reference(group)?;
        for (v, want) in &fixed.map {
            let got = r.map.get(v).cloned().unwrap_or_default();
            let name = format!("{v} of {group} is proportional to the computed basis vector");
            out.push(match got.proportional_to(want) {
                Some(c) if !c.is_zero() => CheckResult::pass(name, format!("scalar {c}")),
                _ => CheckResult::fail(name, format!("computed {got}"), Some(want.clone())),
            });
        }
    }
    Ok(())
}

fn independence(cfg: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let bodies: Vec<Polynomial> = cfg.templates.set(TemplateSet::Rational).map(|t| t.body.clone()).collect();
    let rank = jacobian_rank(&bodies, &eigen_variables(), &reference_point())?;
    out.push(CheckResult::from_bool(
        "Jacobian rank of the rational set at the reference point",
        rank == 13 && bodies.len() == 13,
        format!("rank {rank} of {} invariants in 16 variables", bodies.len()),
    ));
    Ok(())
}

fn counting(_: &SelfCheckConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let series = invariants::poincare_coefficients(9);
    let want = [1u32, 1, 4, 8, 26, 53, 146, 305, 704, 1417].map(BigUint::from);
    out.push(CheckResult::from_bool(
        "Poincaré coefficients of V0+V2+V4+V6, degrees 0..9",
        series == want,
        format!("{series:?}"),
    ));
    let mut ok = true;
    for d in 2..=16u32 {
        let dims: u32 = 3 + (3..=d).map(|k| (k + 1) * (k + 2) / 2).sum::<u32>();
        ok &= invariants::generator_count(d)? == BigUint::from(dims);
    }
    let small: Vec<BigUint> = (2..=4).map(invariants::generator_count).collect::<Result<_>>()?;
    out.push(CheckResult::from_bool(
        "generator counts C(d+3,3) - 7 = dim U_d - 3",
        ok && small == [3u32, 13, 28].map(BigUint::from),
        format!("d = 2, 3, 4 give {small:?}; identity checked for d <= 16"),
    ));
    Ok(())
}

/// Copy of `t` with one existing coefficient raised by one, for mutation
/// testing.
pub fn mutate_coefficient(t: &InvariantTemplate, term: usize) -> Option<InvariantTemplate> {
    let (m, _): (&Monomial, _) = t.body.terms().nth(term)?;
    Some(t.perturbed(m, 1))
}
