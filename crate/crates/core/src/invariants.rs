//! Moment invariants: realizing templates in moment variables, the explicit
//! order-2 and order-3 sets, degree-one invariants, algebraic independence
//! by Jacobian rank, and invariant counting.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::linalg::Matrix;
use crate::poly::{Monomial, Polynomial};
use crate::sl2::{self, Derivation, OrderSet};
use crate::templates::{reference_group, InvariantTemplate, TemplateLibrary, TemplateSet};
use crate::variable::{Family, MomentIndex, Variable};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RealizationSource {
    /// Built from lowest-weight vectors found by the solver.
    Computed,
    /// Fixed vectors, such as the chosen Laplace eigenvectors.
    Fixed,
}

/// Images of template variables as linear forms in moment variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Realization {
    pub map: BTreeMap<Variable, Polynomial>,
    pub source: RealizationSource,
}

impl Realization {
    pub fn new(map: BTreeMap<Variable, Polynomial>, source: RealizationSource) -> Result<Self> {
        for (v, p) in &map {
            let linear = p.terms().all(|(m, _)| matches!(m.factors(), [(Variable::Moment(_), 1)]));
            if !linear {
                return Err(Error::InternalConsistency(format!("image of {v} is not a linear form in moments")));
            }
        }
        Ok(Self { map, source })
    }

    /// `a0..a4` as the standard basis of the order-4 module in `T2*`.
    pub fn binary_quartic() -> Result<Self> {
        let orders = OrderSet::new([2])?;
        let mut map = BTreeMap::new();
        insert_module(&mut map, &orders, Family::A, 4)?;
        Self::new(map, RealizationSource::Computed)
    }

    /// `v, x, y, u` as the standard bases of `V0, V2, V4, V6` in `U3*`.
    pub fn order_three() -> Result<Self> {
        let orders = OrderSet::up_to(3)?;
        let mut map = BTreeMap::new();
        for (family, s) in [(Family::V, 0), (Family::X, 2), (Family::Y, 4), (Family::U, 6)] {
            insert_module(&mut map, &orders, family, s)?;
        }
        Self::new(map, RealizationSource::Computed)
    }

    /// The Laplace eigenvectors `e0..e5`, `c1..c3`, `b1..b7`.
    pub fn eigenvectors() -> Result<Self> {
        Self::from_reference("eigen")
    }

    /// A realization read from a bundled reference group (`basis_t2`, `basis_u3`, `eigen`).
    pub fn from_reference(group: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for b in reference_group(group) {
            map.insert(crate::parse::parse_variable(&b.name)?, b.body);
        }
        Self::new(map, RealizationSource::Fixed)
    }
}

fn insert_module(map: &mut BTreeMap<Variable, Polynomial>, orders: &OrderSet, family: Family, s: u32) -> Result<()> {
    let lwv = sl2::lowest_weight_vectors(orders, s)?;
    let [z] = lwv.as_slice() else {
        return Err(Error::InternalConsistency(format!(
            "expected one module of order {s} in {orders}, found {}",
            lwv.len()
        )));
    };
    for (k, v) in sl2::standard_basis(z, s)?.into_iter().enumerate() {
        map.insert(Variable::template(family, k as u32), v);
    }
    Ok(())
}

/// Substitutes the realization into the template body.
pub fn realize(t: &InvariantTemplate, r: &Realization) -> Result<Polynomial> {
    if let Some(v) = t.variables().into_iter().find(|v| !r.map.contains_key(v)) {
        return Err(Error::UncoveredTemplateVariable(v));
    }
    Ok(t.body.subst(&r.map))
}

/// `p` divided by a Gaussian-rational scalar so that its coefficients are
/// coprime integers with positive leading coefficient.
pub fn normalize_real(p: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::NotRealProportional);
    }
    p.monic().primitive_real().ok_or(Error::NotRealProportional)
}

/// An invariant polynomial in moment variables with real coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NamedInvariant {
    pub name: String,
    pub polynomial: Polynomial,
    /// Highest moment order among the variables.
    pub order: u32,
    pub degree: u32,
}

impl NamedInvariant {
    pub fn new(name: impl Into<String>, polynomial: Polynomial) -> Result<Self> {
        let name = name.into();
        if !polynomial.has_real_coefficients() {
            return Err(Error::NotRealProportional);
        }
        Ok(Self { order: polynomial.max_moment_order(), degree: polynomial.degree(), polynomial, name })
    }
}

/// True iff `E1`, `E2`, `E3` all annihilate `p`.
pub fn verify_annihilated(p: &Polynomial) -> Result<bool> {
    for d in [Derivation::E1, Derivation::E2, Derivation::E3] {
        if !sl2::apply(d, p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first derivation among `E1, E2, E3` that does not annihilate `p`,
/// with the image.
pub fn annihilation_witness(p: &Polynomial) -> Result<Option<(Derivation, Polynomial)>> {
    for d in [Derivation::E1, Derivation::E2, Derivation::E3] {
        let image = sl2::apply(d, p)?;
        if !image.is_zero() {
            return Ok(Some((d, image)));
        }
    }
    Ok(None)
}

/// Invariants of the requested order and set, from the bundled templates.
pub fn generate_invariants(order: u32, set: TemplateSet) -> Result<Vec<NamedInvariant>> {
    generate_with(&TemplateLibrary::builtin(), order, set)
}

/// As [`generate_invariants`], with a caller-supplied template library.
///
/// * order 2: `I1` (the order-0 lowest-weight vector), `I2`, `I3` from the
///   binary-quartic templates; the same three generate both the polynomial
///   and the rational algebra.
/// * order 3, polynomial: the thirteen joint-invariant templates realized in
///   the computed standard bases and rescaled to primitive real form.
/// * order 3, rational: the thirteen eigenvector templates substituted
///   verbatim.
pub fn generate_with(lib: &TemplateLibrary, order: u32, set: TemplateSet) -> Result<Vec<NamedInvariant>> {
    let mut out = Vec::new();
    match (order, set) {
        (2, TemplateSet::Polynomial | TemplateSet::Rational) => {
            let t2 = OrderSet::new([2])?;
            let [u0] = sl2::lowest_weight_vectors(&t2, 0)?.try_into().map_err(|v: Vec<Polynomial>| {
                Error::InternalConsistency(format!("{} invariant linear forms in T2*", v.len()))
            })?;
            out.push(NamedInvariant::new("I1", normalize_real(&u0)?)?);
            let r = Realization::binary_quartic()?;
            for (name, t) in [("I2", "S1"), ("I3", "S2")] {
                out.push(NamedInvariant::new(name, normalize_real(&realize(lib.get(t)?, &r)?)?)?);
            }
        }
        (3, TemplateSet::Polynomial) => {
            let r = Realization::order_three()?;
            for t in lib.set(TemplateSet::Polynomial) {
                out.push(NamedInvariant::new(t.name.clone(), normalize_real(&realize(t, &r)?)?)?);
            }
        }
        (3, TemplateSet::Rational) => {
            let r = Realization::eigenvectors()?;
            for t in lib.set(TemplateSet::Rational) {
                out.push(NamedInvariant::new(t.name.clone(), realize(t, &r)?)?);
            }
        }
        (3, TemplateSet::Binary) | (2, TemplateSet::Binary) => {
            return Err(Error::InvalidTemplate(String::from("the binary set is not a moment invariant set")))
        }
        (o, _) => return Err(Error::UnsupportedGenerationOrder(o)),
    }
    for inv in &out {
        if let Some((d, image)) = annihilation_witness(&inv.polynomial)? {
            return Err(Error::InternalConsistency(format!("{} is not invariant: {d} gives {image}", inv.name)));
        }
    }
    Ok(out)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `I_d = Σ_{j+k+l=m} m!/(j!k!l!) · a_{2j,2k,2l}` for `d = 2m`.
pub fn degree_one_invariant(d: u32) -> Result<NamedInvariant> {
    if d % 2 == 1 {
        return Err(Error::OddOrder(d));
    }
    if !(2..=16).contains(&d) {
        return Err(Error::OrderOutOfRange(d));
    }
    let m = d / 2;
    let mut p = Polynomial::zero();
    for idx in MomentIndex::of_order(m) {
        let c = factorial(m) / (factorial(idx.j) * factorial(idx.k) * factorial(idx.l));
        let v = Variable::moment(2 * idx.j, 2 * idx.k, 2 * idx.l);
        p.add_term(Monomial::var(v), GaussianRational::real(BigRational::from_integer(c)));
    }
    NamedInvariant::new(format!("I{d}"), p)
}

/// Exact rank of the Jacobian of `polys` with respect to `vars` at `point`.
pub fn jacobian_rank(polys: &[Polynomial], vars: &[Variable], point: &BTreeMap<Variable, GaussianRational>) -> Result<usize> {
    if polys.is_empty() || vars.is_empty() {
        return Ok(0);
    }
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        let mut row = Vec::with_capacity(vars.len());
        for v in vars {
            row.push(p.diff(v).eval_exact(point)?);
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(rows).rank())
}

/// `e0..e5, c1..c3, b1..b7`.
pub fn eigen_variables() -> Vec<Variable> {
    let e = (0..=5).map(|i| Variable::template(Family::E, i));
    let c = (1..=3).map(|i| Variable::template(Family::C, i));
    let b = (1..=7).map(|i| Variable::template(Family::B, i));
    e.chain(c).chain(b).collect()
}

/// The integer evaluation point used for the independence argument.
pub fn reference_point() -> BTreeMap<Variable, GaussianRational> {
    const VALUES: [i64; 16] = [1, 1, 23, 53, 97, 151, 227, 311, 419, 541, 661, 827, 1009, 1193, 1427, 1619];
    eigen_variables().into_iter().zip(VALUES).map(|(v, x)| (v, GaussianRational::from_integer(x))).collect()
}

/// Pseudorandom rational point over `vars`, numerators in `[-1000, 1000]`
/// and denominators in `[1, 50]`. Deterministic in `seed`.
pub fn random_point(vars: &[Variable], seed: u64) -> BTreeMap<Variable, GaussianRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vars.iter()
        .map(|v| {
            let num = (rng.next_u32() % 2001) as i64 - 1000;
            let den = (rng.next_u32() % 50) as i64 + 1;
            (*v, GaussianRational::from_ratio(num, den))
        })
        .collect()
}

/// Size of a minimal generating set of the rational invariants of `U_d`:
/// `C(d+3, 3) - 7`.
pub fn generator_count(d: u32) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::OrderOutOfRange(d));
    }
    let n = BigUint::from(d + 3);
    Ok(&n * (&n - 1u32) * (&n - 2u32) / 6u32 - 7u32)
}

/// Dimensions of the degree-`n` invariants of `⊕ V_s`, `n = 0..=max_degree`,
/// by Cayley–Sylvester counting: weight-0 monomials minus weight-2
/// monomials, with `V_s` contributing variables of weights `-s, -s+2, ..., s`.
pub fn poincare_series(modules: &[u32], max_degree: usize) -> Vec<BigUint> {
    let max_s = modules.iter().copied().max().unwrap_or(0) as i64;
    let span = max_s * max_degree as i64;
    let width = (2 * span + 1) as usize;
    // counts[n][w + span]: monomials of degree n and total weight w.
    let mut counts = alloc::vec![alloc::vec![BigUint::zero(); width]; max_degree + 1];
    counts[0][span as usize] = BigUint::one();
    for &s in modules {
        for w in (-(s as i64)..=s as i64).step_by(2) {
            // multiplying by 1/(1 - t z^w), in place with increasing degree
            for n in 1..=max_degree {
                for i in 0..width {
                    let j = i as i64 - w;
                    if (0..width as i64).contains(&j) && !counts[n - 1][j as usize].is_zero() {
                        let add = counts[n - 1][j as usize].clone();
                        counts[n][i] += add;
                    }
                }
            }
        }
    }
    counts
        .iter()
        .map(|row| {
            let w0 = &row[span as usize];
            let w2 = row.get(span as usize + 2).cloned().unwrap_or_default();
            w0 - w2
        })
        .collect()
}

/// Poincaré coefficients of the invariants of `T3*`-joint module
/// `V0 ⊕ V2 ⊕ V4 ⊕ V6`.
pub fn poincare_coefficients(max_degree: usize) -> Vec<BigUint> {
    poincare_series(&[0, 2, 4, 6], max_degree)
}

/// Renames `a_{j,k,l}` to `η_{j,k,l}`.
pub fn to_eta_names(p: &Polynomial) -> Polynomial {
    p.map_variables(|v| match v {
        Variable::Moment(m) => Variable::Eta(m),
        other => other,
    })
}

/// Renames `η_{j,k,l}` back to `a_{j,k,l}`.
pub fn to_moment_names(p: &Polynomial) -> Polynomial {
    p.map_variables(|v| match v {
        Variable::Eta(m) => Variable::Moment(m),
        other => other,
    })
}
