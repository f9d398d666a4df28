//! Potentials and the cyclic calculus.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quiver::{ArrowId, Quiver};
use crate::series::{Path, Series};

/// Lexicographically minimal rotation of a cyclic path.
pub fn canonical_rotation(q: &Quiver, p: &Path) -> Path {
    let d = p.degree();
    let arrows = p.arrows();
    let best = (0..d)
        .min_by(|&i, &j| {
            (0..d)
                .map(|t| arrows[(i + t) % d])
                .cmp((0..d).map(|t| arrows[(j + t) % d]))
        })
        .unwrap_or(0);
    p.rotate(q, best)
}

/// Cyclic series in rotation-canonical form with no constant term.
#[derive(Clone, Debug)]
pub struct Potential<F> {
    series: Series<F>,
}

impl<F: Field> PartialEq for Potential<F> {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series
    }
}

impl<F: Field> Eq for Potential<F> {}

impl<F: Field> Potential<F> {
    pub fn zero(q: &Arc<Quiver>, trunc: usize) -> Self {
        Potential {
            series: Series::zero(q, trunc),
        }
    }

    /// Canonicalizes: rotates every cycle to its minimal rotation and sums
    /// coinciding classes.
    pub fn new(x: &Series<F>) -> Result<Self> {
        let q = Arc::clone(x.quiver());
        let mut out = Series::zero(&q, x.trunc());
        for (p, c) in x.iter() {
            if p.is_idempotent() {
                return Err(Error::ConstantInPotential);
            }
            if !p.is_cycle() {
                return Err(Error::NonCyclic(crate::text::format_path(&q, p)));
            }
            out.add_term(canonical_rotation(&q, p), c.clone());
        }
        Ok(Potential { series: out })
    }

    /// Canonical form of the cyclic terms of `x`, silently dropping the rest.
    pub fn cyclic_part(x: &Series<F>) -> Self {
        let cyc = x.filter(|p| p.is_cycle());
        Potential::new(&cyc).expect("only cycles remain")
    }

    pub fn series(&self) -> &Series<F> {
        &self.series
    }

    pub fn into_series(self) -> Series<F> {
        self.series
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.series.quiver()
    }

    pub fn trunc(&self) -> usize {
        self.series.trunc()
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Potential {
            series: self.series.add(&other.series)?,
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        Potential {
            series: self.series.scale(c),
        }
    }

    /// Degree-2 component `S^(2)`.
    pub fn quadratic_part(&self) -> Self {
        Potential {
            series: self.series.homogeneous(2),
        }
    }

    pub fn with_trunc(&self, trunc: usize) -> Self {
        Potential {
            series: self.series.with_trunc(trunc),
        }
    }
}

/// `∂_a` of a cyclic series (any rotation of each term gives the same result).
pub fn cyclic_derivative<F: Field>(a: ArrowId, s: &Series<F>) -> Series<F> {
    let q = s.quiver();
    let mut out = Series::zero(q, s.trunc());
    for (p, c) in s.iter() {
        if !p.is_cycle() {
            continue;
        }
        for (k, &x) in p.arrows().iter().enumerate() {
            if x == a {
                // a_{k+1} ... a_d a_1 ... a_{k-1}
                let r = p.rotate(q, k);
                out.add_term(r.slice(q, 1, r.degree()), c.clone());
            }
        }
    }
    out
}

/// `∂_a S` for a potential.
pub fn derivative<F: Field>(a: ArrowId, s: &Potential<F>) -> Series<F> {
    cyclic_derivative(a, s.series())
}

/// `Δ_a(f)`: one `(prefix, suffix)` pair per occurrence of `a` in each term,
/// with the coefficient carried by the prefix.
pub fn delta<F: Field>(a: ArrowId, f: &Series<F>) -> Vec<(Series<F>, Series<F>)> {
    let q = f.quiver();
    let n = f.trunc();
    let mut out = Vec::new();
    for (p, c) in f.iter() {
        for (k, &x) in p.arrows().iter().enumerate() {
            if x == a {
                let u = Series::from_path(q, n, p.slice(q, 0, k), c.clone());
                let v = Series::from_path(q, n, p.slice(q, k + 1, p.degree()), F::one());
                out.push((u, v));
            }
        }
    }
    out
}

/// `Σ (u ⊗ v) □ g = Σ v g u`.
pub fn box_product<F: Field>(pairs: &[(Series<F>, Series<F>)], g: &Series<F>) -> Result<Series<F>> {
    let mut out = Series::zero(g.quiver(), g.trunc());
    for (u, v) in pairs {
        out.add_assign(&v.mul(g)?.mul(u)?)?;
    }
    Ok(out)
}
