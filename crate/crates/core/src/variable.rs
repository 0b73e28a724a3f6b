//! Polynomial variables: moment coordinates `a_{j,k,l}`, their normalized
//! counterparts `η_{j,k,l}`, and abstract template variables.

use core::fmt;

/// Exponent triple of a moment coordinate. Ordered lexicographically by
/// `(j, k, l)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MomentIndex {
    pub j: u32,
    pub k: u32,
    pub l: u32,
}

impl MomentIndex {
    pub const fn new(j: u32, k: u32, l: u32) -> Self {
        Self { j, k, l }
    }

    pub const fn order(&self) -> u32 {
        self.j + self.k + self.l
    }

    /// All indices of total order `d`, in lexicographic order.
    pub fn of_order(d: u32) -> impl Iterator<Item = MomentIndex> {
        (0..=d).flat_map(move |j| (0..=d - j).map(move |k| MomentIndex::new(j, k, d - j - k)))
    }

    /// Shift by `(dj, dk, dl)`, `None` when an entry would go negative.
    pub fn shifted(&self, dj: i32, dk: i32, dl: i32) -> Option<MomentIndex> {
        let f = |x: u32, d: i32| u32::try_from(x as i64 + d as i64).ok();
        Some(MomentIndex::new(f(self.j, dj)?, f(self.k, dk)?, f(self.l, dl)?))
    }
}

impl fmt::Display for MomentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.j, self.k, self.l)
    }
}

/// Family letter of a template variable. Declaration order is alphabetical,
/// which is the variable order used in monomial comparisons.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    /// Coefficients `a_0..a_d` of a binary form.
    A,
    /// Laplace eigenvectors of eigenvalue 24 on `T3*`.
    B,
    /// Laplace eigenvectors of eigenvalue 4 on `T3*`.
    C,
    /// Laplace eigenvectors on `T2*`.
    E,
    /// Standard basis of `V6`.
    U,
    /// Standard basis of `V0`.
    V,
    /// Standard basis of `V2`.
    X,
    /// Standard basis of `V4`.
    Y,
}

impl Family {
    pub const ALL: [Family; 8] =
        [Family::A, Family::B, Family::C, Family::E, Family::U, Family::V, Family::X, Family::Y];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
            Family::E => 'e',
            Family::U => 'u',
            Family::V => 'v',
            Family::X => 'x',
            Family::Y => 'y',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.letter() == c)
    }

    /// Order `s` of the standard module `V_s` whose basis this family names,
    /// for the families that carry one.
    pub fn module_order(self) -> Option<u32> {
        match self {
            Family::V => Some(0),
            Family::X => Some(2),
            Family::Y | Family::A => Some(4),
            Family::U => Some(6),
            Family::B | Family::C | Family::E => None,
        }
    }
}

/// A polynomial variable. The derived order (moments, then normalized
/// moments, then templates by family and index) is the variable order of the
/// graded-lexicographic monomial order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Variable {
    /// Coordinate `a_{j,k,l}` on the dual of the ternary forms.
    Moment(MomentIndex),
    /// Normalized central moment `η_{j,k,l}`; transforms exactly like
    /// `a_{j,k,l}`.
    Eta(MomentIndex),
    Template(Family, u32),
}

impl Variable {
    pub const fn moment(j: u32, k: u32, l: u32) -> Self {
        Variable::Moment(MomentIndex::new(j, k, l))
    }

    pub const fn eta(j: u32, k: u32, l: u32) -> Self {
        Variable::Eta(MomentIndex::new(j, k, l))
    }

    pub const fn template(family: Family, index: u32) -> Self {
        Variable::Template(family, index)
    }

    /// Index triple for `Moment` and `Eta` variables.
    pub fn moment_index(&self) -> Option<MomentIndex> {
        match self {
            Variable::Moment(m) | Variable::Eta(m) => Some(*m),
            Variable::Template(..) => None,
        }
    }

    /// Same kind (`Moment` or `Eta`) with a different index.
    pub(crate) fn with_index(&self, idx: MomentIndex) -> Variable {
        match self {
            Variable::Eta(_) => Variable::Eta(idx),
            _ => Variable::Moment(idx),
        }
    }
}

impl fmt::Display for Variable {
    /// `a_2_0_0`, `eta_2_0_0`, `u3`; the same names the parser accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Moment(m) => write!(f, "a_{m}"),
            Variable::Eta(m) => write!(f, "eta_{m}"),
            Variable::Template(fam, i) => write!(f, "{}{}", fam.letter(), i),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn basis_sizes() {
        for d in 0..10u32 {
            assert_eq!(MomentIndex::of_order(d).count() as u32, (d + 1) * (d + 2) / 2);
        }
        let t2: Vec<_> = MomentIndex::of_order(2).collect();
        assert_eq!(t2.first(), Some(&MomentIndex::new(0, 0, 2)));
        assert_eq!(t2.last(), Some(&MomentIndex::new(2, 0, 0)));
    }

    #[test]
    fn variable_order() {
        assert!(Variable::moment(0, 0, 2) < Variable::moment(0, 1, 1));
        assert!(Variable::moment(9, 0, 0) < Variable::eta(0, 0, 2));
        assert!(Variable::eta(9, 0, 0) < Variable::template(Family::A, 0));
        assert!(Variable::template(Family::E, 5) < Variable::template(Family::U, 0));
    }

    #[test]
    fn shift_rejects_negative() {
        assert_eq!(MomentIndex::new(0, 1, 1).shifted(-1, 1, 0), None);
        assert_eq!(MomentIndex::new(1, 1, 0).shifted(-1, 0, 1), Some(MomentIndex::new(0, 1, 1)));
    }
}
