//! The rotation Lie algebra acting on moment variables, in its `so(3)` form
//! (`E1`, `E2`, `E3`) and its `sl2` form (`D+`, `D-`, `H`), plus the
//! representation-theoretic machinery built on it: lowest-weight vectors,
//! standard bases, module decompositions, and Laplace eigenspaces.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicI8, Ordering};

use num_traits::One;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::linalg::Matrix;
use crate::parse::parse_polynomial;
use crate::poly::{Monomial, Polynomial};
use crate::variable::{MomentIndex, Variable};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Derivation {
    E1,
    E2,
    E3,
    Dplus,
    Dminus,
    H,
    /// `D+D- + D-D+ + ½H²`, the Casimir element. Second order, so it is
    /// applied as a composite rather than through the Leibniz rule.
    Laplace,
}

impl Derivation {
    pub const ALL: [Derivation; 7] = [
        Derivation::E1,
        Derivation::E2,
        Derivation::E3,
        Derivation::Dplus,
        Derivation::Dminus,
        Derivation::H,
        Derivation::Laplace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Derivation::E1 => "E1",
            Derivation::E2 => "E2",
            Derivation::E3 => "E3",
            Derivation::Dplus => "D+",
            Derivation::Dminus => "D-",
            Derivation::H => "H",
            Derivation::Laplace => "L",
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn gi(n: i64) -> GaussianRational {
    GaussianRational::from_integer(n)
}

/// Image of a single moment (or η) variable under a first-order generator.
/// Terms whose index would go negative carry a zero coefficient and are
/// dropped.
fn generator_image(d: Derivation, v: &Variable) -> Result<Polynomial> {
    let idx = v.moment_index().ok_or(Error::NotAMomentVariable(*v))?;
    let (j, k, l) = (idx.j as i64, idx.k as i64, idx.l as i64);
    let mut out = Polynomial::zero();
    let mut push = |c: GaussianRational, dj: i32, dk: i32, dl: i32| {
        if let Some(t) = idx.shifted(dj, dk, dl) {
            out.add_term(Monomial::var(v.with_index(t)), c);
        }
    };
    let i = GaussianRational::i();
    match d {
        Derivation::E1 => {
            push(gi(k), 1, -1, 0);
            push(gi(-j), -1, 1, 0);
        }
        Derivation::E2 => {
            push(gi(l), 1, 0, -1);
            push(gi(-j), -1, 0, 1);
        }
        Derivation::E3 => {
            push(gi(l), 0, 1, -1);
            push(gi(-k), 0, -1, 1);
        }
        // The sl2 generators use their own coefficient formulas rather than
        // being composed from E1..E3, so the operator identities relating
        // the two forms are checked, not assumed.
        Derivation::Dplus => {
            push(&i * &gi(k), 1, -1, 0);
            push(&i * &gi(-j), -1, 1, 0);
            push(gi(l), 1, 0, -1);
            push(gi(-j), -1, 0, 1);
        }
        Derivation::Dminus => {
            push(&i * &gi(k), 1, -1, 0);
            push(&i * &gi(-j), -1, 1, 0);
            push(gi(-l), 1, 0, -1);
            push(gi(j), -1, 0, 1);
        }
        Derivation::H => {
            let two_i = &i * &gi(2);
            push(&two_i * &gi(l), 0, 1, -1);
            push(&two_i * &gi(-k), 0, -1, 1);
        }
        Derivation::Laplace => unreachable!("Laplace is not a derivation"),
    }
    Ok(out)
}

fn apply_first_order(d: Derivation, p: &Polynomial) -> Result<Polynomial> {
    let mut images: BTreeMap<Variable, Polynomial> = BTreeMap::new();
    for v in p.variables() {
        images.insert(v, generator_image(d, &v)?);
    }
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        for (v, _) in m.factors() {
            let (e, rest) = m.without_one(v).expect("factor of its own monomial");
            let coeff = c * &gi(e as i64);
            for (n, a) in images[v].terms() {
                out.add_term(rest.mul(n), &coeff * a);
            }
        }
    }
    Ok(out)
}

/// Applies a derivation (Leibniz-extended from its action on moment
/// variables), or the Laplace composite.
pub fn apply(d: Derivation, p: &Polynomial) -> Result<Polynomial> {
    match d {
        Derivation::Laplace => {
            let pm = apply_first_order(Derivation::Dminus, p)?;
            let pp = apply_first_order(Derivation::Dplus, p)?;
            let hp = apply_first_order(Derivation::H, p)?;
            let a = apply_first_order(Derivation::Dplus, &pm)?;
            let b = apply_first_order(Derivation::Dminus, &pp)?;
            let c = apply_first_order(Derivation::H, &hp)?;
            Ok(&(&a + &b) + &c.scale(&GaussianRational::from_ratio(1, 2)))
        }
        _ => apply_first_order(d, p),
    }
}

/// `d` applied `n` times.
pub fn apply_power(d: Derivation, p: &Polynomial, n: u32) -> Result<Polynomial> {
    let mut acc = p.clone();
    for _ in 0..n {
        acc = apply(d, &acc)?;
    }
    Ok(acc)
}

/// Sorted set of moment orders (each ≥ 2) spanning the ambient module.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrderSet(BTreeSet<u32>);

impl OrderSet {
    pub fn new(orders: impl IntoIterator<Item = u32>) -> Result<Self> {
        let set: BTreeSet<u32> = orders.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidOrderSet(String::from("no orders given")));
        }
        if let Some(bad) = set.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidOrderSet(format!("order {bad} is below 2")));
        }
        Ok(Self(set))
    }

    /// `{2, 3, ..., d}`, the orders of `U_d`.
    pub fn up_to(d: u32) -> Result<Self> {
        Self::new(2..=d)
    }

    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> u32 {
        *self.0.iter().next_back().expect("nonempty")
    }

    /// True when the set is `{2, ..., max}`.
    pub fn is_contiguous_from_two(&self) -> bool {
        self.0.len() as u32 == self.max() - 1
    }

    /// `Σ C(k+2, 2)` over the orders.
    pub fn dimension(&self) -> usize {
        self.orders().map(|k| ((k + 1) * (k + 2) / 2) as usize).sum()
    }

    /// Moment variables of all orders, in variable order.
    pub fn basis(&self) -> Vec<Variable> {
        let mut b: Vec<Variable> = self.orders().flat_map(|k| MomentIndex::of_order(k).map(Variable::Moment)).collect();
        b.sort();
        b
    }
}

impl fmt::Display for OrderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders().map(|k| format!("{k}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Matrix of `op` on the linear forms over `basis`: column `c` holds the
/// coordinates of `op(basis[c])`.
fn operator_matrix(op: Derivation, basis: &[Variable]) -> Result<Matrix> {
    let pos: BTreeMap<Variable, usize> = basis.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut m = Matrix::zeros(basis.len(), basis.len());
    for (c, v) in basis.iter().enumerate() {
        let img = apply(op, &Polynomial::var(*v))?;
        for (mono, coeff) in img.terms() {
            let [(w, 1)] = mono.factors() else {
                return Err(Error::InternalConsistency(format!("{op} image of {v} is not linear")));
            };
            let r = *pos
                .get(w)
                .ok_or_else(|| Error::InternalConsistency(format!("{op} maps {v} outside the basis")))?;
            m.set(r, c, coeff.clone());
        }
    }
    Ok(m)
}

fn shifted_identity(m: &Matrix, lambda: &GaussianRational) -> Matrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let v = m.get(i, i) - lambda;
        out.set(i, i, v);
    }
    out
}

fn linear_form(basis: &[Variable], coords: &[GaussianRational]) -> Polynomial {
    Polynomial::from_terms(basis.iter().zip(coords).map(|(v, c)| (c.clone(), Monomial::var(*v))))
}

fn coordinates(p: &Polynomial, basis: &[Variable]) -> Vec<GaussianRational> {
    basis.iter().map(|v| p.coefficient(&Monomial::var(*v))).collect()
}

/// Echelon basis over the full `basis`, so each vector has leading
/// coefficient 1 in graded-lex order and multiplicities > 1 get a reduced
/// basis of the joint space.
fn combine(vectors: Vec<Polynomial>, basis: &[Variable]) -> Vec<Polynomial> {
    let rows = vectors.iter().map(|p| coordinates(p, basis)).collect();
    Matrix::echelon_basis(rows, basis.len()).iter().map(|r| linear_form(basis, r)).collect()
}

static WEIGHT_SIGN: AtomicI8 = AtomicI8::new(0);

/// Sign `σ` such that lowest-weight vectors satisfy `H(z) = σ·ord(z)·z`.
///
/// Determined once from the known lowest-weight vector
/// `2a_{0,1,1} + i(a_{0,0,2} - a_{0,2,0})` of the order-4 module in `T2*`,
/// then cached.
pub fn weight_sign() -> i32 {
    match WEIGHT_SIGN.load(Ordering::Relaxed) {
        0 => {
            let z = parse_polynomial("2*a_0_1_1 + I*(a_0_0_2 - a_0_2_0)").expect("literal");
            let hz = apply(Derivation::H, &z).expect("moment variables only");
            let s = match hz.proportional_to(&z) {
                Some(l) if l == gi(4) => 1,
                Some(l) if l == gi(-4) => -1,
                other => panic!("H does not act on the reference vector by ±4: {other:?}"),
            };
            WEIGHT_SIGN.store(s as i8, Ordering::Relaxed);
            s
        }
        s => s as i32,
    }
}

/// Basis of the lowest-weight vectors of order `s` among linear forms in the
/// moment variables of `orders`: `D-(z) = 0` and `H(z) = σ·s·z` (see
/// [`weight_sign`]). Each vector has leading coefficient 1.
pub fn lowest_weight_vectors(orders: &OrderSet, s: u32) -> Result<Vec<Polynomial>> {
    let lambda = gi(weight_sign() as i64 * s as i64);
    let mut found = Vec::new();
    // The operators preserve the order of a moment variable, so the joint
    // solution space is the direct sum of the per-order ones.
    for k in orders.orders() {
        let basis: Vec<Variable> = MomentIndex::of_order(k).map(Variable::Moment).collect();
        let dminus = operator_matrix(Derivation::Dminus, &basis)?;
        let h = operator_matrix(Derivation::H, &basis)?;
        let system = dminus.vstack(&shifted_identity(&h, &lambda));
        found.extend(system.nullspace().iter().map(|x| linear_form(&basis, x)));
    }
    Ok(combine(found, &orders.basis()))
}

/// The standard basis `v_k = (s-k)!/s! · D+^k(z)`, `k = 0..=s`, of the
/// irreducible module generated by the lowest-weight vector `z`.
pub fn standard_basis(z: &Polynomial, s: u32) -> Result<Vec<Polynomial>> {
    let mut out = Vec::with_capacity(s as usize + 1);
    let mut power = z.clone();
    // running (s-k)!/s! = 1 / (s (s-1) ... (s-k+1))
    let mut factor = GaussianRational::one();
    for k in 0..=s {
        if k > 0 {
            power = apply(Derivation::Dplus, &power)?;
            factor = &factor / &gi((s - k + 1) as i64);
        }
        out.push(power.scale(&factor));
    }
    if !apply(Derivation::Dplus, &power)?.is_zero() {
        return Err(Error::NotLowestWeight(s));
    }
    Ok(out)
}

/// Largest `n` with `D+^n(z) ≠ 0`; `None` for `z = 0` or if `D+` fails to be
/// nilpotent within `limit` steps.
pub fn dplus_order(z: &Polynomial, limit: u32) -> Result<Option<u32>> {
    if z.is_zero() {
        return Ok(None);
    }
    let mut cur = z.clone();
    for n in 0..=limit {
        let next = apply(Derivation::Dplus, &cur)?;
        if next.is_zero() {
            return Ok(Some(n));
        }
        cur = next;
    }
    Ok(None)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionEntry {
    pub multiplicity: u32,
    pub lowest_weight_basis: Vec<Polynomial>,
}

/// Multiplicities of the irreducible modules `V_s` in the span of the moment
/// variables of an [`OrderSet`], with the lowest-weight vectors realizing
/// them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleDecomposition {
    pub orders: OrderSet,
    pub entries: BTreeMap<u32, DecompositionEntry>,
}

impl ModuleDecomposition {
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        self.entries.iter().map(|(s, e)| (*s, e.multiplicity)).collect()
    }

    /// `Σ multiplicity·(s+1)`.
    pub fn dimension(&self) -> usize {
        self.entries.iter().map(|(s, e)| e.multiplicity as usize * (*s as usize + 1)).sum()
    }
}

impl fmt::Display for ModuleDecomposition {
    /// `V0 x1, V4 x1`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.entries.iter().map(|(s, e)| format!("V{s} x{}", e.multiplicity)).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Closed-form multiplicities `l_k^{(d)}` of `V_{2k}` in `U_d*`.
pub fn closed_form_multiplicities(d: u32) -> BTreeMap<u32, u32> {
    (0..=d)
        .filter_map(|k| {
            let l = if k <= 1 { (d - k) / 2 } else { (d - k) / 2 + 1 };
            (l > 0).then_some((2 * k, l))
        })
        .collect()
}

/// Closed-form decomposition of a single `T_d* ≅ V_{2d} ⊕ V_{2d-4} ⊕ ...`.
pub fn single_order_closed_form(d: u32) -> BTreeMap<u32, u32> {
    (0..=d / 2).map(|j| (2 * d - 4 * j, 1)).collect()
}

/// Decomposes the span of the moment variables of `orders` empirically and,
/// for `{2..d}`, cross-checks the result against the closed form.
pub fn decompose(orders: &OrderSet) -> Result<ModuleDecomposition> {
    let mut entries = BTreeMap::new();
    for s in (0..=2 * orders.max()).step_by(2) {
        let lwv = lowest_weight_vectors(orders, s)?;
        if !lwv.is_empty() {
            entries.insert(s, DecompositionEntry { multiplicity: lwv.len() as u32, lowest_weight_basis: lwv });
        }
    }
    let dec = ModuleDecomposition { orders: orders.clone(), entries };
    if dec.dimension() != orders.dimension() {
        return Err(Error::InternalConsistency(format!(
            "modules of {orders} span dimension {} but the space has dimension {}",
            dec.dimension(),
            orders.dimension()
        )));
    }
    if orders.is_contiguous_from_two() {
        let expected = closed_form_multiplicities(orders.max());
        if dec.multiplicities() != expected {
            return Err(Error::InternalConsistency(format!(
                "empirical multiplicities {:?} differ from closed form {:?}",
                dec.multiplicities(),
                expected
            )));
        }
    }
    Ok(dec)
}

/// Eigenvalue of the Laplace operator on `V_s`.
pub fn laplace_eigenvalue(s: u32) -> u64 {
    (s as u64) * (s as u64 + 2) / 2
}

/// Exact eigenspaces of the Laplace operator on the linear forms of
/// `orders`, keyed by eigenvalue, each with an echelon basis.
pub fn laplace_eigenbasis(orders: &OrderSet) -> Result<BTreeMap<u64, Vec<Polynomial>>> {
    let dec = decompose(orders)?;
    let eigenvalues: BTreeSet<u64> = dec.entries.keys().map(|&s| laplace_eigenvalue(s)).collect();
    let full = orders.basis();
    let mut out = BTreeMap::new();
    let mut total = 0;
    for &lambda in &eigenvalues {
        let mut found = Vec::new();
        for k in orders.orders() {
            let basis: Vec<Variable> = MomentIndex::of_order(k).map(Variable::Moment).collect();
            let l = operator_matrix(Derivation::Laplace, &basis)?;
            let shifted = shifted_identity(&l, &gi(lambda as i64));
            found.extend(shifted.nullspace().iter().map(|x| linear_form(&basis, x)));
        }
        let space = combine(found, &full);
        total += space.len();
        out.insert(lambda, space);
    }
    if total != orders.dimension() {
        return Err(Error::InternalConsistency(format!(
            "Laplace eigenspaces span {total} of {} dimensions",
            orders.dimension()
        )));
    }
    Ok(out)
}

/// True when the linear form `p` lies in the span of `space`.
pub fn in_span(p: &Polynomial, space: &[Polynomial]) -> bool {
    let mut vars: BTreeSet<Variable> = p.variables();
    for q in space {
        vars.extend(q.variables());
    }
    let basis: Vec<Variable> = vars.into_iter().collect();
    let rows: Vec<Vec<GaussianRational>> = space.iter().map(|q| coordinates(q, &basis)).collect();
    let base_rank = if rows.is_empty() { 0 } else { Matrix::from_rows(rows.clone()).rank() };
    let mut with = rows;
    with.push(coordinates(p, &basis));
    Matrix::from_rows(with).rank() == base_rank
}

/// Outcome of one operator relation checked on every basis variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
    /// First failing basis variable with the nonzero residual `lhs - rhs`.
    pub counterexample: Option<(Variable, Polynomial)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommutatorReport {
    pub orders: OrderSet,
    pub checks: Vec<RelationCheck>,
}

impl CommutatorReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, relation: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.relation == relation)
    }
}

type Op<'a> = &'a dyn Fn(&Polynomial) -> Result<Polynomial>;

fn check_relation(name: String, basis: &[Variable], lhs: Op<'_>, rhs: Op<'_>) -> Result<RelationCheck> {
    for v in basis {
        let x = Polynomial::var(*v);
        let residual = &lhs(&x)? - &rhs(&x)?;
        if !residual.is_zero() {
            return Ok(RelationCheck { relation: name, passed: false, counterexample: Some((*v, residual)) });
        }
    }
    Ok(RelationCheck { relation: name, passed: true, counterexample: None })
}

fn op(d: Derivation) -> impl Fn(&Polynomial) -> Result<Polynomial> {
    move |p| apply(d, p)
}

fn commutator(a: Derivation, b: Derivation) -> impl Fn(&Polynomial) -> Result<Polynomial> {
    move |p| Ok(&apply(a, &apply(b, p)?)? - &apply(b, &apply(a, p)?)?)
}

fn scaled(d: Derivation, c: GaussianRational) -> impl Fn(&Polynomial) -> Result<Polynomial> {
    move |p| Ok(apply(d, p)?.scale(&c))
}

/// Sign `σ ∈ {±1}` with `[a, b] = σ·c` on the first basis variable where
/// `c` acts nontrivially.
fn bracket_sign(a: Derivation, b: Derivation, c: Derivation, basis: &[Variable]) -> Result<i64> {
    for v in basis {
        let x = Polynomial::var(*v);
        let rhs = apply(c, &x)?;
        if rhs.is_zero() {
            continue;
        }
        let lhs = commutator(a, b)(&x)?;
        if lhs == rhs {
            return Ok(1);
        }
        if lhs == -&rhs {
            return Ok(-1);
        }
        return Ok(0);
    }
    Ok(1)
}

/// Checks the `sl2` commutators, the `so(3)` brackets (signs fixed
/// empirically), the operator identities between the two forms, and that
/// the Laplace operator commutes with every generator.
pub fn check_commutators(orders: &OrderSet) -> Result<CommutatorReport> {
    use Derivation::*;
    let basis = orders.basis();
    let i = GaussianRational::i();
    let mut checks = Vec::new();

    checks.push(check_relation(String::from("[H,D+] = 2D+"), &basis, &commutator(H, Dplus), &scaled(Dplus, gi(2)))?);
    checks.push(check_relation(String::from("[H,D-] = -2D-"), &basis, &commutator(H, Dminus), &scaled(Dminus, gi(-2)))?);
    checks.push(check_relation(String::from("[D+,D-] = H"), &basis, &commutator(Dplus, Dminus), &op(H))?);

    for (a, b, c) in [(E1, E2, E3), (E1, E3, E2), (E2, E3, E1)] {
        let sign = bracket_sign(a, b, c, &basis)?;
        let name = match sign {
            1 => format!("[{a},{b}] = {c}"),
            -1 => format!("[{a},{b}] = -{c}"),
            _ => format!("[{a},{b}] = ±{c}"),
        };
        let check = if sign == 0 {
            check_relation(name, &basis, &commutator(a, b), &op(c))?
        } else {
            check_relation(name, &basis, &commutator(a, b), &scaled(c, gi(sign)))?
        };
        checks.push(check);
    }

    let dplus_from_e = |p: &Polynomial| Ok(&apply(E1, p)?.scale(&i) + &apply(E2, p)?);
    let dminus_from_e = |p: &Polynomial| Ok(&apply(E1, p)?.scale(&i) - &apply(E2, p)?);
    checks.push(check_relation(String::from("D+ = iE1 + E2"), &basis, &op(Dplus), &dplus_from_e)?);
    checks.push(check_relation(String::from("D- = iE1 - E2"), &basis, &op(Dminus), &dminus_from_e)?);
    checks.push(check_relation(String::from("H = 2iE3"), &basis, &op(H), &scaled(E3, &i * &gi(2)))?);

    let e_squares = |p: &Polynomial| {
        let mut acc = Polynomial::zero();
        for e in [E1, E2, E3] {
            acc = &acc + &apply_power(e, p, 2)?;
        }
        Ok(acc)
    };
    let casimir = |p: &Polynomial| {
        let a = apply(Dplus, &apply(Dminus, p)?)?;
        let b = apply(Dminus, &apply(Dplus, p)?)?;
        let c = apply_power(H, p, 2)?.scale(&GaussianRational::from_ratio(1, 2));
        Ok(&(&a + &b) + &c)
    };
    checks.push(check_relation(String::from("L = D+D- + D-D+ + H^2/2"), &basis, &op(Laplace), &casimir)?);
    checks.push(check_relation(
        String::from("L = -2(E1^2 + E2^2 + E3^2)"),
        &basis,
        &op(Laplace),
        &|p: &Polynomial| Ok(e_squares(p)?.scale(&gi(-2))),
    )?);

    for x in [E1, E2, E3, Dplus, Dminus, H] {
        let zero = |_: &Polynomial| Ok(Polynomial::zero());
        checks.push(check_relation(format!("[L,{x}] = 0"), &basis, &commutator(Laplace, x), &zero)?);
    }

    Ok(CommutatorReport { orders: orders.clone(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn orders(o: &[u32]) -> OrderSet {
        OrderSet::new(o.iter().copied()).unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(apply(Derivation::E1, &p("a_2_0_0")).unwrap(), p("-2*a_1_1_0"));
        for d in [Derivation::E1, Derivation::E2, Derivation::E3] {
            assert!(apply(d, &p("a_0_0_2 + a_0_2_0 + a_2_0_0")).unwrap().is_zero());
        }
        assert_eq!(apply(Derivation::Laplace, &p("a_0_1_1")).unwrap(), p("12*a_0_1_1"));
        assert_eq!(apply(Derivation::H, &p("a_0_0_2")).unwrap(), p("4*I*a_0_1_1"));
    }

    #[test]
    fn laplace_on_t2_basis() {
        let l = |s: &str| apply(Derivation::Laplace, &p(s)).unwrap();
        assert_eq!(l("a_0_0_2"), p("-4*a_2_0_0 + 8*a_0_0_2 - 4*a_0_2_0"));
        assert_eq!(l("a_1_0_1"), p("12*a_1_0_1"));
        assert_eq!(l("a_1_1_1"), p("24*a_1_1_1"));
        assert_eq!(l("a_0_1_2"), p("20*a_0_1_2 - 4*a_2_1_0 - 4*a_0_3_0"));
    }

    #[test]
    fn template_variables_rejected() {
        assert_eq!(
            apply(Derivation::E1, &p("a_2_0_0 + x0")),
            Err(Error::NotAMomentVariable(Variable::template(crate::Family::X, 0)))
        );
    }

    #[test]
    fn eta_variables_keep_their_kind() {
        assert_eq!(apply(Derivation::E1, &p("eta_2_0_0")).unwrap(), p("-2*eta_1_1_0"));
    }

    #[test]
    fn lowest_weight_sign_is_negative() {
        assert_eq!(weight_sign(), -1);
    }

    #[test]
    fn commutators_hold() {
        for o in [&[2][..], &[2, 3], &[2, 3, 4]] {
            let report = check_commutators(&orders(o)).unwrap();
            assert!(report.all_passed(), "{:?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn lowest_weight_examples() {
        let t2 = orders(&[2]);
        assert_eq!(lowest_weight_vectors(&t2, 0).unwrap(), vec![p("a_0_0_2 + a_0_2_0 + a_2_0_0")]);
        let v = lowest_weight_vectors(&t2, 4).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].proportional_to(&p("2*a_0_1_1 + I*(a_0_0_2 - a_0_2_0)")).is_some());
        assert!(lowest_weight_vectors(&t2, 2).unwrap().is_empty());
        let u = lowest_weight_vectors(&orders(&[2, 3]), 6).unwrap();
        assert_eq!(u.len(), 1);
        assert!(u[0].proportional_to(&p("a_0_0_3 - 3*a_0_2_1 + I*(a_0_3_0 - 3*a_0_1_2)")).is_some());
    }

    #[test]
    fn standard_basis_examples() {
        let v0 = p("2*a_0_1_1 + I*(a_0_0_2 - a_0_2_0)");
        let b = standard_basis(&v0, 4).unwrap();
        assert_eq!(b[1], p("I*a_1_0_1 + a_1_1_0"));
        assert_eq!(b[2], p("-(I/3)*(a_0_0_2 + a_0_2_0 - 2*a_2_0_0)"));
        assert_eq!(b[3], p("a_1_1_0 - I*a_1_0_1"));
        assert_eq!(b[4], p("-2*a_0_1_1 + I*(-a_0_2_0 + a_0_0_2)"));
        let z = p("a_0_0_2 + a_0_2_0 + a_2_0_0");
        assert_eq!(standard_basis(&z, 0).unwrap(), vec![z.clone()]);
        assert_eq!(standard_basis(&v0, 2), Err(Error::NotLowestWeight(2)));
    }

    #[test]
    fn decomposition_examples() {
        let m = |o: &[u32]| decompose(&orders(o)).unwrap().multiplicities();
        assert_eq!(m(&[2]), BTreeMap::from([(0, 1), (4, 1)]));
        assert_eq!(m(&[2, 3]), BTreeMap::from([(0, 1), (2, 1), (4, 1), (6, 1)]));
        assert_eq!(m(&[2, 3, 4]), BTreeMap::from([(0, 2), (2, 1), (4, 2), (6, 1), (8, 1)]));
        assert_eq!(m(&[3]), BTreeMap::from([(2, 1), (6, 1)]));
        assert_eq!(decompose(&orders(&[2])).unwrap().to_string(), "V0 x1, V4 x1");
    }

    #[test]
    fn closed_forms_agree() {
        for d in 2..=12 {
            let mut summed: BTreeMap<u32, u32> = BTreeMap::new();
            for k in 2..=d {
                for (s, m) in single_order_closed_form(k) {
                    *summed.entry(s).or_default() += m;
                }
            }
            assert_eq!(summed, closed_form_multiplicities(d), "d = {d}");
        }
    }

    #[test]
    fn laplace_eigenspaces_t2() {
        let eig = laplace_eigenbasis(&orders(&[2])).unwrap();
        assert_eq!(eig.keys().copied().collect::<Vec<_>>(), vec![0, 12]);
        assert_eq!(eig[&0], vec![p("a_0_0_2 + a_0_2_0 + a_2_0_0")]);
        assert_eq!(eig[&12].len(), 5);
        for e in ["a_0_1_1", "a_1_0_1", "a_1_1_0", "a_0_2_0 - a_0_0_2", "a_2_0_0 - a_0_0_2"] {
            assert!(in_span(&p(e), &eig[&12]), "{e}");
        }
        assert!(!in_span(&p("a_2_0_0"), &eig[&12]));
    }

    #[test]
    fn order_set_validation() {
        assert!(OrderSet::new([1, 2]).is_err());
        assert!(OrderSet::new([]).is_err());
        let o = orders(&[2, 4]);
        assert!(!o.is_contiguous_from_two());
        assert_eq!(o.dimension(), 6 + 15);
        assert_eq!(o.to_string(), "{2,4}");
    }
}
