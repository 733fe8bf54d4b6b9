//! Divisors on a single component and the genericity oracle.
//!
//! On an elliptic component with generic marked points, two effective
//! divisors are linearly equivalent iff their classes agree in a free
//! vector space spanned by the degree and one symbol per generic point,
//! modulo the relations actually present (here `2X = Y + Z`). Classes are
//! stored as exact rational vectors `(degree, y, z)`. A point of class
//! [`PointClass::Generic`] stands for a point chosen freely on the curve;
//! it can absorb any class, so only degrees are compared.

use std::fmt;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::GonalityError;

/// Class of a point as `(degree, y, z)`.
pub type ClassVector = [Rational64; 3];

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointClass {
    Marked(ClassVector),
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPoint {
    pub component: String,
    pub label: String,
    pub class: PointClass,
}

impl MarkedPoint {
    pub fn marked(component: &str, label: &str, class: ClassVector) -> Self {
        Self {
            component: component.to_string(),
            label: label.to_string(),
            class: PointClass::Marked(class),
        }
    }

    pub fn generic(component: &str, label: &str) -> Self {
        Self {
            component: component.to_string(),
            label: label.to_string(),
            class: PointClass::Generic,
        }
    }

    /// The point `Y` with class `(1, 1, 0)`.
    pub fn y(component: &str) -> Self {
        Self::marked(component, "Y", [r(1), r(1), r(0)])
    }

    /// The point `Z` with class `(1, 0, 1)`.
    pub fn z(component: &str) -> Self {
        Self::marked(component, "Z", [r(1), r(0), r(1)])
    }

    /// A point with no relation to anything else on its component.
    pub fn isolated(component: &str, label: &str) -> Self {
        Self::marked(component, label, [r(1), r(0), r(0)])
    }

    /// Point with offset `u` on a component whose `Y`, `Z` have offsets
    /// `uy != uz`. Offsets are affine coordinates along multiples of `P - Q`,
    /// so the class is the affine combination `t Y + (1 - t) Z`.
    pub fn from_offset(component: &str, label: &str, u: u32, uy: u32, uz: u32) -> Self {
        assert_ne!(uy, uz, "Y and Z must be distinct points");
        let t = Rational64::new(i64::from(u) - i64::from(uz), i64::from(uy) - i64::from(uz));
        Self::marked(component, label, [r(1), t, r(1) - t])
    }
}

/// An effective divisor `sum m_i p_i` on one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub component: String,
    pub terms: Vec<(MarkedPoint, u32)>,
}

impl Divisor {
    pub fn new(component: &str) -> Self {
        Self {
            component: component.to_string(),
            terms: Vec::new(),
        }
    }

    pub fn plus(mut self, point: &MarkedPoint, multiplicity: u32) -> Self {
        if let Some(term) = self.terms.iter_mut().find(|(p, _)| p.label == point.label) {
            term.1 += multiplicity;
        } else {
            self.terms.push((point.clone(), multiplicity));
        }
        self
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, m)| m).sum()
    }

    pub fn has_generic(&self) -> bool {
        self.terms
            .iter()
            .any(|(p, _)| p.class == PointClass::Generic)
    }

    /// Class vector when every point is marked.
    pub fn class(&self) -> Option<ClassVector> {
        let mut acc = [r(0), r(0), r(0)];
        for (p, m) in &self.terms {
            match &p.class {
                PointClass::Generic => return None,
                PointClass::Marked(v) => {
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a += *x * r(i64::from(*m));
                    }
                }
            }
        }
        Some(acc)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if *m != 1 {
                write!(f, "{m}")?;
            }
            f.write_str(&p.label)?;
        }
        Ok(())
    }
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Linear equivalence under the genericity model.
///
/// Equal degree is required. If either side contains a generic point only
/// degrees are compared; otherwise the class vectors must coincide.
pub fn lin_equiv(lhs: &Divisor, rhs: &Divisor) -> Result<bool, GonalityError> {
    if lhs.component != rhs.component {
        return Err(GonalityError::MixedComponents(
            lhs.component.clone(),
            rhs.component.clone(),
        ));
    }
    for d in [lhs, rhs] {
        if let Some((p, _)) = d.terms.iter().find(|(p, _)| p.component != d.component) {
            return Err(GonalityError::MixedComponents(
                d.component.clone(),
                p.component.clone(),
            ));
        }
    }
    if lhs.degree() != rhs.degree() {
        return Ok(false);
    }
    match (lhs.class(), rhs.class()) {
        (Some(a), Some(b)) => Ok(a == b),
        _ => Ok(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> (MarkedPoint, MarkedPoint, MarkedPoint) {
        // offsets of C'_2: X = 1, Y = 2, Z = 0
        (
            MarkedPoint::from_offset("D", "X", 1, 2, 0),
            MarkedPoint::y("D"),
            MarkedPoint::z("D"),
        )
    }

    fn div(points: &[(&MarkedPoint, u32)]) -> Divisor {
        points
            .iter()
            .fold(Divisor::new("D"), |d, (p, m)| d.plus(p, *m))
    }

    #[test]
    fn offset_classes() {
        let (x, y, z) = xyz();
        assert_eq!(
            x.class,
            PointClass::Marked([r(1), Rational64::new(1, 2), Rational64::new(1, 2)])
        );
        assert_eq!(MarkedPoint::from_offset("D", "Y", 2, 2, 0).class, y.class);
        assert_eq!(MarkedPoint::from_offset("D", "Z", 0, 2, 0).class, z.class);
    }

    #[test]
    fn examples() {
        let (x, y, z) = xyz();
        assert!(lin_equiv(&div(&[(&x, 2)]), &div(&[(&y, 1), (&z, 1)])).unwrap());
        assert!(!lin_equiv(&div(&[(&x, 2)]), &div(&[(&y, 2)])).unwrap());
        assert!(!lin_equiv(&div(&[(&y, 2)]), &div(&[(&z, 2)])).unwrap());
        assert_eq!(div(&[(&y, 1), (&z, 1)]).to_string(), "Y+Z");
        assert_eq!(div(&[(&x, 2)]).to_string(), "2X");
    }

    #[test]
    fn generic_points_absorb_classes() {
        let (_, y, _) = xyz();
        let f = MarkedPoint::generic("D", "f1");
        let g = MarkedPoint::generic("D", "f2");
        assert!(lin_equiv(&div(&[(&f, 1), (&g, 1)]), &div(&[(&y, 2)])).unwrap());
        assert!(!lin_equiv(&div(&[(&f, 1)]), &div(&[(&y, 2)])).unwrap());
    }

    #[test]
    fn mixed_components_rejected() {
        let (x, _, _) = xyz();
        let other = Divisor::new("E").plus(&MarkedPoint::y("E"), 2);
        assert!(matches!(
            lin_equiv(&div(&[(&x, 2)]), &other),
            Err(GonalityError::MixedComponents(..))
        ));
        let smuggled = Divisor::new("D").plus(&MarkedPoint::y("E"), 1);
        assert!(lin_equiv(&div(&[(&x, 1)]), &smuggled).is_err());
    }

    /// Every pair of {X, Y, Z}-supported divisors of degree <= 4: the oracle
    /// agrees with "equal, or differ by a multiple of 2X - Y - Z".
    #[test]
    fn only_relation_is_2x_eq_y_plus_z() {
        let (x, y, z) = xyz();
        let mut all = Vec::new();
        for deg in 0..=4u32 {
            for a in 0..=deg {
                for b in 0..=deg - a {
                    all.push((a, b, deg - a - b));
                }
            }
        }
        let build = |&(a, b, c): &(u32, u32, u32)| {
            let mut d = Divisor::new("D");
            for (p, m) in [(&x, a), (&y, b), (&z, c)] {
                if m > 0 {
                    d = d.plus(p, m);
                }
            }
            d
        };
        for p in &all {
            for q in &all {
                let (dx, dy, dz) = (
                    i64::from(p.0) - i64::from(q.0),
                    i64::from(p.1) - i64::from(q.1),
                    i64::from(p.2) - i64::from(q.2),
                );
                let expected = dx % 2 == 0 && dy == -dx / 2 && dz == -dx / 2;
                assert_eq!(
                    lin_equiv(&build(p), &build(q)).unwrap(),
                    expected,
                    "{p:?} vs {q:?}"
                );
            }
        }
    }
}
