//! Continuous algebra homomorphisms given by arrow images.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::potential::Potential;
use crate::quiver::{ArrowId, Quiver};
use crate::series::{same_quiver, Path, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstitutionKind {
    Identity,
    /// Images are linear combinations of arrows.
    ChangeOfArrows,
    /// Linear part is the identity and `φ(a) - a ∈ m^{depth+1}` for all `a`.
    Unitriangular {
        depth: usize,
    },
    General,
}

/// `φ` with `φ|_R = id` and `φ(a) ∈ e_{h(a)} m e_{t(a)}` for every arrow.
#[derive(Clone, Debug)]
pub struct ArrowSubstitution<F> {
    from: Arc<Quiver>,
    to: Arc<Quiver>,
    trunc: usize,
    images: Vec<Series<F>>,
}

impl<F: Field> PartialEq for ArrowSubstitution<F> {
    fn eq(&self, other: &Self) -> bool {
        same_quiver(&self.from, &other.from)
            && same_quiver(&self.to, &other.to)
            && self.trunc == other.trunc
            && self.images == other.images
    }
}

impl<F: Field> Eq for ArrowSubstitution<F> {}

impl<F: Field> ArrowSubstitution<F> {
    /// `images[i]` is the image of arrow `i` of `from`.
    pub fn new(
        from: &Arc<Quiver>,
        to: &Arc<Quiver>,
        trunc: usize,
        images: Vec<Series<F>>,
    ) -> Result<Self> {
        if from.vertices() != to.vertices() {
            return Err(Error::QuiverMismatch);
        }
        if images.len() != from.num_arrows() {
            return Err(Error::InvalidParams(format!(
                "expected {} arrow images, got {}",
                from.num_arrows(),
                images.len()
            )));
        }
        let mut bound = Vec::with_capacity(images.len());
        for (a, img) in from.arrow_ids().zip(images) {
            if !same_quiver(img.quiver(), to) {
                return Err(Error::QuiverMismatch);
            }
            if img.trunc() != trunc {
                return Err(Error::TruncationMismatch(trunc, img.trunc()));
            }
            for p in img.terms().keys() {
                if p.is_idempotent() || p.head() != from.head(a) || p.tail() != from.tail(a) {
                    return Err(Error::BadImage(from.name(a).to_string()));
                }
            }
            bound.push(img.rebind(to)?);
        }
        Ok(ArrowSubstitution {
            from: Arc::clone(from),
            to: Arc::clone(to),
            trunc,
            images: bound,
        })
    }

    pub fn identity(q: &Arc<Quiver>, trunc: usize) -> Self {
        let images = q.arrow_ids().map(|a| Series::arrow(q, trunc, a)).collect();
        ArrowSubstitution {
            from: Arc::clone(q),
            to: Arc::clone(q),
            trunc,
            images,
        }
    }

    /// Images given by arrow name; unnamed arrows go to the arrow of `to`
    /// carrying the same name.
    pub fn from_named(
        from: &Arc<Quiver>,
        to: &Arc<Quiver>,
        trunc: usize,
        named: &[(&str, Series<F>)],
    ) -> Result<Self> {
        let mut images: Vec<Option<Series<F>>> = vec![None; from.num_arrows()];
        for (name, img) in named {
            images[from.arrow_id(name)?.index()] = Some(img.clone());
        }
        let images = from
            .arrow_ids()
            .zip(images)
            .map(|(a, img)| match img {
                Some(s) => Ok(s),
                None => Series::arrow_named(to, trunc, from.name(a)),
            })
            .collect::<Result<Vec<_>>>()?;
        ArrowSubstitution::new(from, to, trunc, images)
    }

    pub fn from_quiver(&self) -> &Arc<Quiver> {
        &self.from
    }

    pub fn to_quiver(&self) -> &Arc<Quiver> {
        &self.to
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn image(&self, a: ArrowId) -> &Series<F> {
        &self.images[a.index()]
    }

    pub fn images(&self) -> &[Series<F>] {
        &self.images
    }

    /// `φ^(1)` as a matrix: rows indexed by arrows of `to`, columns by
    /// arrows of `from`.
    pub fn linear_matrix(&self) -> Matrix<F> {
        let mut m = Matrix::zeros(self.to.num_arrows(), self.from.num_arrows());
        for (j, img) in self.images.iter().enumerate() {
            for (p, c) in img.iter() {
                if p.degree() == 1 {
                    m.set(p.arrows()[0].index(), j, c.clone());
                }
            }
        }
        m
    }

    pub fn kind(&self) -> SubstitutionKind {
        let linear = self
            .images
            .iter()
            .all(|s| s.max_degree().is_none_or(|d| d <= 1));
        if same_quiver(&self.from, &self.to) {
            let mut depth = usize::MAX;
            for a in self.from.arrow_ids() {
                let diff = self.images[a.index()]
                    .sub(&Series::arrow(&self.to, self.trunc, a))
                    .expect("same quiver and truncation");
                if let Some(d) = diff.order() {
                    depth = depth.min(d.saturating_sub(1));
                }
            }
            if depth == usize::MAX {
                return SubstitutionKind::Identity;
            }
            if depth >= 1 {
                return SubstitutionKind::Unitriangular { depth };
            }
        }
        if linear {
            SubstitutionKind::ChangeOfArrows
        } else {
            SubstitutionKind::General
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.linear_matrix().inverse().is_some()
    }

    /// Applies `φ` to a series over `from`; truncates at `N`.
    pub fn apply(&self, x: &Series<F>) -> Result<Series<F>> {
        if !same_quiver(x.quiver(), &self.from) {
            return Err(Error::QuiverMismatch);
        }
        if x.trunc() != self.trunc {
            return Err(Error::TruncationMismatch(self.trunc, x.trunc()));
        }
        let n = self.trunc;
        let orders: Vec<usize> = self
            .images
            .iter()
            .map(|s| s.order().unwrap_or(n + 1))
            .collect();
        let mut out = Series::zero(&self.to, n);
        for (p, c) in x.iter() {
            if p.is_idempotent() {
                out.add_term(Path::idempotent(p.head()), c.clone());
                continue;
            }
            let arrows = p.arrows();
            // Degree still to be contributed by the factors right of position i.
            let mut rest: usize = arrows.iter().map(|a| orders[a.index()]).sum();
            if rest > n {
                continue;
            }
            let mut acc: Option<Series<F>> = None;
            for a in arrows {
                rest -= orders[a.index()];
                let img = &self.images[a.index()];
                let next = match acc {
                    None => img.with_trunc(n - rest).with_trunc(n),
                    Some(prev) => prev.mul_bounded(img, n - rest),
                };
                if next.is_zero() {
                    acc = None;
                    break;
                }
                acc = Some(next);
            }
            if let Some(prod) = acc {
                out.add_scaled(c, &prod)?;
            }
        }
        Ok(out)
    }

    pub fn apply_potential(&self, s: &Potential<F>) -> Result<Potential<F>> {
        Potential::new(&self.apply(s.series())?)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !same_quiver(&inner.to, &self.from) {
            return Err(Error::QuiverMismatch);
        }
        if inner.trunc != self.trunc {
            return Err(Error::TruncationMismatch(self.trunc, inner.trunc));
        }
        let images = inner
            .images
            .iter()
            .map(|s| self.apply(&s.rebind(&self.from)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ArrowSubstitution {
            from: Arc::clone(&inner.from),
            to: Arc::clone(&self.to),
            trunc: self.trunc,
            images,
        })
    }

    /// Two-sided inverse modulo `m^{N+1}`: invert the linear part, then
    /// correct unitriangularly until the error passes degree `N`.
    pub fn invert(&self) -> Result<Self> {
        let l = self.linear_matrix();
        let linv = l.inverse().ok_or(Error::SingularLinearPart)?;
        let n = self.trunc;
        let lin_images = self
            .to
            .arrow_ids()
            .map(|b| {
                let mut s = Series::zero(&self.from, n);
                for a in self.from.arrow_ids() {
                    s.add_term(
                        Path::arrow(&self.from, a),
                        linv.get(a.index(), b.index()).clone(),
                    );
                }
                s
            })
            .collect::<Vec<_>>();
        let lin = ArrowSubstitution::new(&self.to, &self.from, n, lin_images)?;
        let mut theta = lin.clone();
        for _ in 0..=n {
            let roundtrip = self.compose(&theta)?;
            let mut done = true;
            let mut images = Vec::with_capacity(theta.images.len());
            for b in self.to.arrow_ids() {
                let err = roundtrip.images[b.index()].sub(&Series::arrow(&self.to, n, b))?;
                if err.is_zero() {
                    images.push(theta.images[b.index()].clone());
                } else {
                    done = false;
                    images.push(theta.images[b.index()].sub(&lin.apply(&err)?)?);
                }
            }
            if done {
                return Ok(theta);
            }
            theta = ArrowSubstitution::new(&self.to, &self.from, n, images)?;
        }
        Ok(theta)
    }

    /// Same images viewed at a lower truncation degree.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        ArrowSubstitution {
            from: Arc::clone(&self.from),
            to: Arc::clone(&self.to),
            trunc,
            images: self.images.iter().map(|s| s.with_trunc(trunc)).collect(),
        }
    }
}
