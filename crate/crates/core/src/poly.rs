//! Sparse multivariate polynomials over the Gaussian rationals.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::variable::Variable;

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with strictly positive exponents.
///
/// Ordered graded-lexicographically: total degree first, then the first
/// variable (in [`Variable`] order) whose exponents differ decides, the larger
/// exponent being the larger monomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(alloc::vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeats and dropping
    /// zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (Variable, u32)>) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn factors(&self) -> &[(Variable, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lowers the exponent of `v` by one; `None` if `v` does not occur.
    pub fn without_one(&self, v: &Variable) -> Option<(u32, Monomial)> {
        let pos = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    // `va` is absent from `other`, so `self` has the larger
                    // exponent at the earlier variable.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial with nonzero Gaussian-rational coefficients keyed by monomial.
/// The zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: Variable) -> Self {
        Self::term(GaussianRational::one(), Monomial::var(v))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GaussianRational, Monomial)>) -> Self {
        let mut p = Self::zero();
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·m` in place, pruning a coefficient that cancels to zero.
    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: descending graded-lex, leading term first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&GaussianRational> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Total degree; zero for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect()
    }

    /// Largest `j+k+l` among moment and η variables.
    pub fn max_moment_order(&self) -> u32 {
        self.variables().iter().filter_map(|v| v.moment_index()).map(|m| m.order()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_term(&self, c: &GaussianRational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        // Multiplying by a monomial preserves the term order, so no merging.
        Polynomial { terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: &Variable) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.without_one(v) {
                out.add_term(rest, c * &GaussianRational::from_integer(e as i64));
            }
        }
        out
    }

    /// Substitutes polynomials for variables; unmapped variables pass
    /// through. Substitution is simultaneous.
    pub fn subst(&self, map: &BTreeMap<Variable, Polynomial>) -> Polynomial {
        let mut powers: BTreeMap<(Variable, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Polynomial::constant(c.clone());
            for &(v, e) in &m.0 {
                match map.get(&v) {
                    Some(image) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| image.pow(e));
                        acc = &acc * &*pw;
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial(kept);
            for (n, a) in acc.terms {
                out.add_term(n.mul(&kept), a);
            }
        }
        out
    }

    /// Renames variables through `f`, merging terms that collide.
    pub fn map_variables(&self, mut f: impl FnMut(Variable) -> Variable) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (c.clone(), Monomial::from_factors(m.0.iter().map(|&(v, e)| (f(v), e))))),
        )
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// The scalar `λ ≠ 0` with `self = λ·other`, if any. Two zero
    /// polynomials are proportional with `λ = 1`.
    pub fn proportional_to(&self, other: &Polynomial) -> Option<GaussianRational> {
        match (self.leading_term(), other.leading_term()) {
            (None, None) => Some(GaussianRational::one()),
            (Some((mp, cp)), Some((mq, cq))) => {
                if mp != mq || self.len() != other.len() {
                    return None;
                }
                let lambda = cp / cq;
                self.terms
                    .iter()
                    .zip(other.terms.iter())
                    .all(|((m, a), (n, b))| m == n && *a == &lambda * b)
                    .then_some(lambda)
            }
            _ => None,
        }
    }

    /// Floating-point evaluation; coefficients are rounded to `f64` here and
    /// nowhere else.
    pub fn eval(&self, assignment: impl Fn(&Variable) -> Option<Complex64>) -> Result<Complex64> {
        let mut values: BTreeMap<Variable, Complex64> = BTreeMap::new();
        for v in self.variables() {
            let x = assignment(&v).ok_or(Error::UnassignedVariable(v))?;
            values.insert(v, x);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex64();
            for (v, e) in &m.0 {
                t *= values[v].powu(*e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, point: &BTreeMap<Variable, GaussianRational>) -> Result<GaussianRational> {
        let mut total = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = point.get(v).ok_or(Error::UnassignedVariable(*v))?;
                for _ in 0..*e {
                    t *= x;
                }
            }
            total += &t;
        }
        Ok(total)
    }

    /// Divides out the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => Polynomial::zero(),
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Rescales a polynomial with rational coefficients to coprime integer
    /// coefficients with positive leading coefficient. `None` if any
    /// coefficient is non-real.
    pub fn primitive_real(&self) -> Option<Polynomial> {
        if !self.has_real_coefficients() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let mut lcm = num_bigint::BigInt::one();
        let mut gcd = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.re().denom());
            gcd = gcd.gcd(c.re().numer());
        }
        let mut factor = num_rational::BigRational::new(lcm, gcd);
        let lead = self.leading_coefficient().unwrap();
        if lead.re() < &num_rational::BigRational::zero() {
            factor = -factor;
        }
        Some(self.scale(&GaussianRational::real(factor)))
    }
}

impl From<Variable> for Polynomial {
    fn from(v: Variable) -> Self {
        Polynomial::var(v)
    }
}

impl From<GaussianRational> for Polynomial {
    fn from(c: GaussianRational) -> Self {
        Polynomial::constant(c)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    /// Canonical term order with `*`, `^`, and `I`; parses back through
    /// [`crate::parse::parse_polynomial`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let negative_real = c.is_real() && c.re() < &num_rational::BigRational::zero();
            let shown = if negative_real { -c } else { c.clone() };
            match (n, negative_real) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{shown}")?;
            } else if shown.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{shown}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::variable::Family;
    use alloc::string::ToString;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn a(j: u32, k: u32, l: u32) -> Variable {
        Variable::moment(j, k, l)
    }

    #[test]
    fn add_examples() {
        assert_eq!(p("a_2_0_0") + p("a_0_2_0"), p("a_2_0_0 + a_0_2_0"));
        assert!((p("a_2_0_0") + p("-a_2_0_0")).is_zero());
        assert_eq!(p("(2+I)*a_0_1_1") + p("(1-I)*a_0_1_1"), p("3*a_0_1_1"));
    }

    #[test]
    fn mul_examples() {
        let q = p("a_2_0_0 + I*a_0_1_1");
        assert_eq!(&q * &Polynomial::one(), q);
        assert_eq!(p("a_2_0_0 + a_0_2_0") * p("a_2_0_0 - a_0_2_0"), p("a_2_0_0^2 - a_0_2_0^2"));
        assert_eq!(p("I*a_0_1_1") * p("I*a_0_1_1"), p("-a_0_1_1^2"));
    }

    #[test]
    fn diff_examples() {
        assert_eq!(p("a_2_0_0^2").diff(&a(2, 0, 0)), p("2*a_2_0_0"));
        assert!(p("a_2_0_0").diff(&a(0, 2, 0)).is_zero());
        assert_eq!(p("3*e1^2*e2").diff(&Variable::template(Family::E, 1)), p("6*e1*e2"));
    }

    #[test]
    fn subst_examples() {
        let mut map = BTreeMap::new();
        map.insert(Variable::template(Family::A, 0), p("x0 + x1"));
        assert_eq!(p("a0^2").subst(&map), p("x0^2 + 2*x0*x1 + x1^2"));

        let s1 = p("a0*a4 + 3*a2^2 - 4*a1*a3");
        let s2 = p("a0*a2*a4 + 2*a1*a2*a3 - a2^3 - a0*a3^2 - a1^2*a4");
        let vals = [1, 0, 1, 0, 1];
        let map: BTreeMap<_, _> = vals
            .iter()
            .enumerate()
            .map(|(i, &x)| (Variable::template(Family::A, i as u32), Polynomial::constant(x.into())))
            .collect();
        assert_eq!(s1.subst(&map), Polynomial::constant(4.into()));
        assert!(s2.subst(&map).is_zero());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(p("I*a_0_1_1").conj(), p("-I*a_0_1_1"));
        let real = p("a_2_0_0^2 - 3*a_0_1_1");
        assert_eq!(real.conj(), real);
        assert_eq!(
            p("2*a_0_1_1 + I*(a_0_0_2 - a_0_2_0)").conj(),
            p("2*a_0_1_1 - I*(a_0_0_2 - a_0_2_0)")
        );
    }

    #[test]
    fn proportional_examples() {
        let q = p("a_0_0_2^2 - a_0_0_2*a_0_2_0 + 3*a_0_1_1^2");
        assert_eq!(q.scale(&2.into()).proportional_to(&q), Some(2.into()));
        assert_eq!(q.proportional_to(&(&q + &p("a_2_0_0"))), None);
        assert_eq!(q.scale(&GaussianRational::i()).proportional_to(&q), Some(GaussianRational::i()));
        assert_eq!(Polynomial::zero().proportional_to(&Polynomial::zero()), Some(1.into()));
        assert_eq!(Polynomial::zero().proportional_to(&q), None);
    }

    #[test]
    fn eval_examples() {
        let one = |_: &Variable| Some(Complex64::new(1.0, 0.0));
        assert_eq!(p("a_2_0_0 + a_0_2_0 + a_0_0_2").eval(one).unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(Polynomial::zero().eval(|_| None).unwrap(), Complex64::new(0.0, 0.0));
        let err = p("a_2_0_0 + a_0_2_0").eval(|v| (*v == a(2, 0, 0)).then_some(Complex64::new(1.0, 0.0)));
        assert_eq!(err, Err(Error::UnassignedVariable(a(0, 2, 0))));
    }

    #[test]
    fn grlex_leading_term() {
        let q = p("a_2_0_0 + a_0_2_0^2 + a_0_0_2*a_2_0_0");
        assert_eq!(q.leading_term().unwrap().0.to_string(), "a_0_0_2*a_2_0_0");
        let lin = p("a_2_0_0 + 5*a_0_1_1");
        assert_eq!(lin.leading_coefficient(), Some(&GaussianRational::from_integer(5)));
    }

    #[test]
    fn primitive_real_scaling() {
        assert_eq!(p("-3/2*a_2_0_0 + 6*a_0_2_0").primitive_real(), Some(p("4*a_0_2_0 - a_2_0_0")));
        assert_eq!(p("a_2_0_0 + I*a_0_2_0").primitive_real(), None);
    }

    #[test]
    fn display_round_trip() {
        let q = p("(1/2 - 3*I)*a_0_1_1^2*e3 - a_2_0_0 + 7/3 + I*x1");
        assert_eq!(p(&q.to_string()), q);
    }
}
