//! Matrix group schemes with polynomial group laws.

use std::fmt;

use crate::algebra::{FieldSpec, Ideal, Poly, Ring, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupScheme {
    /// Coordinates `x_ij` plus `y` with `det * y = 1`.
    GL(usize),
    SL(usize),
    /// Vector group under addition; coordinates `x, y, z` or `x1..xn`.
    Additive(usize),
    Subgroup { parent: Box<GroupScheme>, ideal: Ideal },
}

/// Suffix marking the second factor in group-law rings.
pub const SECOND: &str = "_b";

impl GroupScheme {
    /// The GL, SL or Additive scheme at the root of a subgroup chain.
    pub fn base(&self) -> &GroupScheme {
        match self {
            GroupScheme::Subgroup { parent, .. } => parent.base(),
            g => g,
        }
    }

    pub fn n(&self) -> usize {
        match self.base() {
            GroupScheme::GL(n) | GroupScheme::SL(n) | GroupScheme::Additive(n) => *n,
            GroupScheme::Subgroup { .. } => unreachable!(),
        }
    }

    pub fn is_matrix(&self) -> bool {
        !matches!(self.base(), GroupScheme::Additive(_))
    }

    /// Number of series entries of a point (`n*n` or `n`).
    pub fn entry_count(&self) -> usize {
        if self.is_matrix() {
            self.n() * self.n()
        } else {
            self.n()
        }
    }

    pub fn entry_names(&self) -> Vec<String> {
        let n = self.n();
        if self.is_matrix() {
            let sep = if n >= 10 { "_" } else { "" };
            (1..=n).flat_map(|i| (1..=n).map(move |j| format!("x{i}{sep}{j}"))).collect()
        } else if n <= 3 {
            ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        }
    }

    /// Coordinate names: entries, plus `y` for GL.
    pub fn coord_names(&self) -> Vec<String> {
        let mut v = self.entry_names();
        if matches!(self.base(), GroupScheme::GL(_)) {
            v.push("y".into());
        }
        v
    }

    pub fn coord_ring(&self, field: &FieldSpec) -> Ring {
        Ring::new(field.clone(), self.coord_names())
    }

    /// Ring with two copies of the coordinates, second copy suffixed.
    pub fn law_ring(&self, field: &FieldSpec) -> Ring {
        let names = self.coord_names();
        let second: Vec<String> = names.iter().map(|v| format!("{v}{SECOND}")).collect();
        Ring::new(field.clone(), names.into_iter().chain(second))
    }

    /// Determinant of the generic matrix in the coordinate ring.
    pub fn det_poly(&self, ring: &Ring, offset: usize) -> Poly {
        let n = self.n();
        let m: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| ring.var(offset + i * n + j)).collect()).collect();
        det_of(&m, ring)
    }

    /// Defining equations of the scheme in [`Self::coord_ring`].
    pub fn equations(&self, field: &FieldSpec) -> Result<Vec<Poly>> {
        let ring = self.coord_ring(field);
        Ok(match self {
            GroupScheme::GL(_) => {
                let y = ring.var(ring.nvars() - 1);
                vec![&(&self.det_poly(&ring, 0) * &y) - &ring.one()]
            }
            GroupScheme::SL(_) => vec![&self.det_poly(&ring, 0) - &ring.one()],
            GroupScheme::Additive(_) => Vec::new(),
            GroupScheme::Subgroup { parent, ideal } => {
                let mut eqs = parent.equations(field)?;
                for g in ideal.gens() {
                    eqs.push(ideal.ring.embed_into(g, &ring)?);
                }
                eqs
            }
        })
    }

    pub fn defining_ideal(&self, field: &FieldSpec) -> Result<Ideal> {
        Ok(Ideal::new(self.coord_ring(field), self.equations(field)?))
    }

    pub fn identity_coords(&self, field: &FieldSpec) -> Vec<Scalar> {
        let n = self.n();
        let mut v: Vec<Scalar> = if self.is_matrix() {
            (0..n * n).map(|k| Scalar::from_i64(field, (k / n == k % n) as i64)).collect()
        } else {
            vec![Scalar::zero(field); n]
        };
        if matches!(self.base(), GroupScheme::GL(_)) {
            v.push(Scalar::one(field));
        }
        v
    }

    /// Coordinates of `x * x'` as polynomials in [`Self::law_ring`].
    pub fn mul_law(&self, field: &FieldSpec) -> Vec<Poly> {
        let ring = self.law_ring(field);
        let c = self.coord_names().len();
        let n = self.n();
        match self.base() {
            GroupScheme::Additive(_) => (0..n).map(|i| &ring.var(i) + &ring.var(c + i)).collect(),
            base => {
                let mut out: Vec<Poly> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        (0..n).fold(ring.zero(), |acc, k| &acc + &(&ring.var(i * n + k) * &ring.var(c + k * n + j)))
                    })
                    .collect();
                if matches!(base, GroupScheme::GL(_)) {
                    out.push(&ring.var(c - 1) * &ring.var(2 * c - 1));
                }
                out
            }
        }
    }

    /// Coordinates of `x^{-1}` as polynomials in [`Self::coord_ring`]
    /// (valid modulo the defining equations).
    pub fn inv_law(&self, field: &FieldSpec) -> Vec<Poly> {
        let ring = self.coord_ring(field);
        let n = self.n();
        match self.base() {
            GroupScheme::Additive(_) => (0..n).map(|i| -&ring.var(i)).collect(),
            base => {
                let m: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| ring.var(i * n + j)).collect()).collect();
                let adj = adjugate_of(&m, &ring);
                let mut out: Vec<Poly> = adj.into_iter().flatten().collect();
                if matches!(base, GroupScheme::GL(_)) {
                    let y = ring.var(ring.nvars() - 1);
                    out = out.iter().map(|p| p * &y).collect();
                    out.push(self.det_poly(&ring, 0));
                }
                out
            }
        }
    }

    /// Validates a subgroup ideal's ring against this scheme's coordinates.
    pub fn subgroup(parent: GroupScheme, ideal: Ideal) -> Result<GroupScheme> {
        let names = parent.coord_names();
        for v in &ideal.ring.vars {
            if !names.contains(v) {
                return Err(Error::InvalidInput(format!("subgroup ideal uses unknown coordinate {v}")));
            }
        }
        Ok(GroupScheme::Subgroup { parent: Box::new(parent), ideal })
    }
}

impl fmt::Display for GroupScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupScheme::GL(n) => write!(f, "GL({n})"),
            GroupScheme::SL(n) => write!(f, "SL({n})"),
            GroupScheme::Additive(n) => write!(f, "Additive({n})"),
            GroupScheme::Subgroup { parent, ideal } => write!(f, "Subgroup({parent}, {ideal})"),
        }
    }
}

/// Laplace expansion; fine for the small sizes used here.
pub fn det_of(m: &[Vec<Poly>], ring: &Ring) -> Poly {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                let minor: Vec<Vec<Poly>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect()).collect();
                let term = &m[0][j] * &det_of(&minor, ring);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

pub fn adjugate_of(m: &[Vec<Poly>], ring: &Ring) -> Vec<Vec<Poly>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![ring.one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adj[i][j] = (-1)^{i+j} M_{ji}
                    let minor: Vec<Vec<Poly>> = m
                        .iter()
                        .enumerate()
                        .filter(|(r, _)| *r != j)
                        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, p)| p.clone()).collect())
                        .collect();
                    let d = det_of(&minor, ring);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -&d
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_and_equations() {
        let q = FieldSpec::Q;
        assert_eq!(GroupScheme::SL(2).coord_names(), ["x11", "x12", "x21", "x22"]);
        assert_eq!(GroupScheme::GL(2).coord_names().last().unwrap(), "y");
        assert_eq!(GroupScheme::Additive(2).coord_names(), ["x", "y"]);
        let r = GroupScheme::SL(2).coord_ring(&q);
        assert_eq!(r.fmt_poly(&GroupScheme::SL(2).equations(&q).unwrap()[0]), "-x12*x21 + x11*x22 - 1");
    }

    #[test]
    fn inverse_law_is_inverse() {
        let q = FieldSpec::Q;
        for g in [GroupScheme::SL(2), GroupScheme::GL(2), GroupScheme::SL(3)] {
            let ring = g.coord_ring(&q);
            let ideal = g.defining_ideal(&q).unwrap();
            let inv = g.inv_law(&q);
            let law = g.mul_law(&q);
            // x * inv(x) should be the identity modulo the equations
            let c = g.coord_names().len();
            let mut images: Vec<Poly> = (0..c).map(|i| ring.var(i)).collect();
            images.extend(inv.iter().cloned());
            let gb = ideal.groebner(crate::algebra::MonomialOrder::GrevLex).unwrap();
            let id = g.identity_coords(&q);
            for (k, p) in law.iter().enumerate() {
                let v = p.compose(&images, &q);
                let diff = &v - &ring.constant(id[k].clone());
                assert!(gb.contains(&diff), "{g} coordinate {k}");
            }
        }
    }
}
