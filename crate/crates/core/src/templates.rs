//! Invariant templates over abstract basis variables, and the block-format
//! data files they are stored in.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::parse::parse_polynomial;
use crate::poly::{Monomial, Polynomial};
use crate::variable::{Family, Variable};

const BUILTIN_TEMPLATES: &str = include_str!("../data/templates.txt");
const BUILTIN_REFERENCE: &str = include_str!("../data/reference.txt");

/// A named polynomial from a block-format file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub group: String,
    pub name: String,
    pub body: Polynomial,
}

/// Parses `@<group> <name>` blocks. Bodies run until the next header or
/// blank line and may span lines; `#` starts a comment line.
pub fn parse_blocks(src: &str) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    let mut current: Option<Pending> = None;
    let mut offset = 0;
    for line in src.split_inclusive('\n') {
        let trimmed = line.trim();
        if let Some(header) = trimmed.strip_prefix('@') {
            if let Some(p) = current.take() {
                out.push(p.finish()?);
            }
            let mut parts = header.split_whitespace();
            let (Some(group), Some(name), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse { offset, message: String::from("header must be `@<group> <name>`") });
            };
            current = Some(Pending { group: group.to_string(), name: name.to_string(), body: String::new(), segments: Vec::new() });
        } else if trimmed.starts_with('#') || trimmed.is_empty() {
            if current.as_ref().is_some_and(|c| !c.body.is_empty()) {
                out.push(current.take().expect("checked").finish()?);
            }
        } else {
            let Some(cur) = current.as_mut() else {
                return Err(Error::Parse { offset, message: String::from("polynomial outside of a block") });
            };
            if !cur.body.is_empty() {
                cur.body.push(' ');
            }
            let lead = line.len() - line.trim_start().len();
            cur.segments.push((cur.body.len(), offset + lead));
            cur.body.push_str(trimmed);
        }
        offset += line.len();
    }
    if let Some(p) = current {
        out.push(p.finish()?);
    }
    Ok(out)
}

struct Pending {
    group: String,
    name: String,
    body: String,
    /// `(position in body, position in file)` at the start of each line.
    segments: Vec<(usize, usize)>,
}

impl Pending {
    fn finish(self) -> Result<Block> {
        let body = parse_polynomial(&self.body).map_err(|e| match e {
            Error::Parse { offset, message } => {
                let (b, f) = self.segments.iter().rev().find(|(b, _)| *b <= offset).copied().unwrap_or((0, 0));
                Error::Parse { offset: f + offset - b, message: format!("in `{}`: {message}", self.name) }
            }
            other => other,
        })?;
        Ok(Block { group: self.group, name: self.name, body })
    }
}

/// Which generating family a template belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TemplateSet {
    /// Invariants of the binary quartic in `a0..a4`.
    Binary,
    /// Joint invariants of `V0 ⊕ V2 ⊕ V4 ⊕ V6` in standard-basis variables.
    Polynomial,
    /// Rational generators in Laplace-eigenvector variables.
    Rational,
}

impl TemplateSet {
    pub fn as_str(self) -> &'static str {
        match self {
            TemplateSet::Binary => "binary",
            TemplateSet::Polynomial => "polynomial",
            TemplateSet::Rational => "rational",
        }
    }

    fn families(self) -> &'static [Family] {
        match self {
            TemplateSet::Binary => &[Family::A],
            TemplateSet::Polynomial => &[Family::V, Family::X, Family::Y, Family::U],
            TemplateSet::Rational => &[Family::E, Family::C, Family::B],
        }
    }
}

impl fmt::Display for TemplateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(TemplateSet::Binary),
            "polynomial" => Ok(TemplateSet::Polynomial),
            "rational" => Ok(TemplateSet::Rational),
            other => Err(Error::Parse { offset: 0, message: format!("unknown template set `{other}`") }),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantTemplate {
    pub name: String,
    pub set: TemplateSet,
    pub body: Polynomial,
}

impl InvariantTemplate {
    /// Checks that the body is a nonzero integer-coefficient polynomial in
    /// the template variables of `set`.
    pub fn new(name: impl Into<String>, set: TemplateSet, body: Polynomial) -> Result<Self> {
        let name = name.into();
        if body.is_zero() {
            return Err(Error::InvalidTemplate(format!("`{name}` is zero")));
        }
        for v in body.variables() {
            match v {
                Variable::Template(f, _) if set.families().contains(&f) => {}
                _ => return Err(Error::InvalidTemplate(format!("`{name}` uses {v}, not a {set} template variable"))),
            }
        }
        if let Some((m, c)) = body.terms().find(|(_, c)| !c.is_real() || !c.re().is_integer()) {
            return Err(Error::InvalidTemplate(format!("`{name}` has non-integer coefficient {c} on {m}")));
        }
        Ok(Self { name, set, body })
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.body.variables()
    }

    /// Copy with `delta` added to the coefficient of `m` (which need not be
    /// present). Used for mutation testing of the self-check.
    pub fn perturbed(&self, m: &Monomial, delta: i64) -> InvariantTemplate {
        let mut body = self.body.clone();
        body.add_term(m.clone(), GaussianRational::from_integer(delta));
        InvariantTemplate { name: self.name.clone(), set: self.set, body }
    }
}

/// Ordered collection of templates, as loaded from a data file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TemplateLibrary {
    templates: Vec<InvariantTemplate>,
}

impl TemplateLibrary {
    pub fn parse(src: &str) -> Result<Self> {
        let mut templates: Vec<InvariantTemplate> = Vec::new();
        for b in parse_blocks(src)? {
            let set: TemplateSet = b.group.parse()?;
            if templates.iter().any(|t| t.name == b.name) {
                return Err(Error::InvalidTemplate(format!("duplicate template `{}`", b.name)));
            }
            templates.push(InvariantTemplate::new(b.name, set, b.body)?);
        }
        Ok(Self { templates })
    }

    /// The templates shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_TEMPLATES).expect("bundled template file is valid")
    }

    pub fn iter(&self) -> impl Iterator<Item = &InvariantTemplate> {
        self.templates.iter()
    }

    pub fn set(&self, set: TemplateSet) -> impl Iterator<Item = &InvariantTemplate> {
        self.templates.iter().filter(move |t| t.set == set)
    }

    pub fn get(&self, name: &str) -> Result<&InvariantTemplate> {
        self.templates.iter().find(|t| t.name == name).ok_or_else(|| Error::UnknownTemplate(name.to_string()))
    }

    /// Replaces the template of the same name.
    pub fn replace(&mut self, t: InvariantTemplate) -> Result<()> {
        let slot = self
            .templates
            .iter_mut()
            .find(|s| s.name == t.name)
            .ok_or_else(|| Error::UnknownTemplate(t.name.clone()))?;
        *slot = t;
        Ok(())
    }
}

/// Bundled reference polynomial `name` of `group` (`degree_one`,
/// `order_two`, `order_three`, `basis_t2`, `basis_u3`, `eigen`).
pub fn reference(group: &str, name: &str) -> Option<Polynomial> {
    reference_group(group).into_iter().find(|b| b.name == name).map(|b| b.body)
}

/// All bundled reference polynomials of `group`, in file order.
pub fn reference_group(group: &str) -> Vec<Block> {
    parse_blocks(BUILTIN_REFERENCE)
        .expect("bundled reference file is valid")
        .into_iter()
        .filter(|b| b.group == group)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_counts() {
        let lib = TemplateLibrary::builtin();
        assert_eq!(lib.set(TemplateSet::Binary).count(), 2);
        assert_eq!(lib.set(TemplateSet::Polynomial).count(), 13);
        assert_eq!(lib.set(TemplateSet::Rational).count(), 13);
        let degrees: Vec<u32> = lib.set(TemplateSet::Polynomial).map(|t| t.body.degree()).collect();
        assert_eq!(degrees, [1, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn s1_body() {
        let lib = TemplateLibrary::builtin();
        assert_eq!(lib.get("S1").unwrap().body, parse_polynomial("a0*a4 + 3*a2^2 - 4*a1*a3").unwrap());
        assert_eq!(lib.get("nope"), Err(Error::UnknownTemplate("nope".into())));
    }

    #[test]
    fn rejects_bad_templates() {
        assert!(TemplateLibrary::parse("@polynomial t\ne1^2\n").is_err());
        assert!(TemplateLibrary::parse("@binary t\na0/2\n").is_err());
        assert!(TemplateLibrary::parse("@binary t\na0\n@binary t\na1\n").is_err());
        assert!(TemplateLibrary::parse("@cubic t\na0\n").is_err());
        assert!(TemplateLibrary::parse("a0\n").is_err());
    }

    #[test]
    fn parse_error_offset_is_file_relative() {
        let src = "@binary t\na0 + * a1\n";
        match TemplateLibrary::parse(src) {
            Err(Error::Parse { offset, .. }) => assert_eq!(&src[offset..offset + 1], "*"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reference_data_present() {
        assert_eq!(reference_group("degree_one").len(), 4);
        assert_eq!(reference_group("eigen").len(), 16);
        assert_eq!(reference("eigen", "b3").unwrap(), parse_polynomial("a_1_1_1").unwrap());
    }
}
