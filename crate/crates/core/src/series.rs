//! Truncated elements of the complete path algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quiver::{ArrowId, Quiver, Vertex};

/// A path `a1 a2 ... ad` read right to left: `t(a_p) = h(a_{p+1})`.
///
/// `head` is `h(a1)` and `tail` is `t(ad)`. The empty path at `v` is the
/// idempotent `e_v` and has `head == tail == v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    head: Vertex,
    tail: Vertex,
    arrows: Vec<ArrowId>,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.tail.cmp(&other.tail))
            .then_with(|| self.head.cmp(&other.head))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn idempotent(v: Vertex) -> Self {
        Path {
            head: v,
            tail: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: ArrowId) -> Self {
        Path {
            head: q.head(a),
            tail: q.tail(a),
            arrows: vec![a],
        }
    }

    /// Builds a nonempty path, checking composability.
    pub fn new(q: &Quiver, arrows: Vec<ArrowId>) -> Result<Self> {
        let (Some(&first), Some(&last)) = (arrows.first(), arrows.last()) else {
            return Err(Error::Parse("empty arrow list needs a vertex".into()));
        };
        for a in &arrows {
            if a.index() >= q.num_arrows() {
                return Err(Error::UnknownArrow(format!("#{}", a.0)));
            }
        }
        for w in arrows.windows(2) {
            if q.tail(w[0]) != q.head(w[1]) {
                return Err(Error::Parse(format!(
                    "`{}` and `{}` are not composable",
                    q.name(w[0]),
                    q.name(w[1])
                )));
            }
        }
        Ok(Path {
            head: q.head(first),
            tail: q.tail(last),
            arrows,
        })
    }

    pub fn head(&self) -> Vertex {
        self.head
    }

    pub fn tail(&self) -> Vertex {
        self.tail
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn degree(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_idempotent(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_cycle(&self) -> bool {
        !self.arrows.is_empty() && self.head == self.tail
    }

    /// `self * other`, or `None` when `t(self) != h(other)`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.tail != other.head {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() + other.arrows.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            head: self.head,
            tail: other.tail,
            arrows,
        })
    }

    /// Vertex sitting just left of position `i` (between `a_{i-1}` and `a_i`,
    /// zero based), i.e. `h(a_i)`, or the tail when `i` is the end.
    pub fn vertex_at(&self, q: &Quiver, i: usize) -> Vertex {
        if i < self.arrows.len() {
            q.head(self.arrows[i])
        } else {
            self.tail
        }
    }

    /// Subpath `arrows[i..j]`; empty slices become the idempotent at position `i`.
    pub fn slice(&self, q: &Quiver, i: usize, j: usize) -> Path {
        if i >= j {
            return Path::idempotent(self.vertex_at(q, i));
        }
        Path {
            head: q.head(self.arrows[i]),
            tail: q.tail(self.arrows[j - 1]),
            arrows: self.arrows[i..j].to_vec(),
        }
    }

    /// Rotation starting at `k`: `a_k ... a_d a_1 ... a_{k-1}` (cycles only).
    pub fn rotate(&self, q: &Quiver, k: usize) -> Path {
        debug_assert!(self.is_cycle());
        let mut arrows = Vec::with_capacity(self.arrows.len());
        arrows.extend_from_slice(&self.arrows[k..]);
        arrows.extend_from_slice(&self.arrows[..k]);
        let v = q.head(arrows[0]);
        Path {
            head: v,
            tail: v,
            arrows,
        }
    }
}

/// Element of `R<<A>>/m^{N+1}`: finitely many paths of degree at most `N`
/// with nonzero coefficients.
#[derive(Clone, Debug)]
pub struct Series<F> {
    quiver: Arc<Quiver>,
    trunc: usize,
    terms: BTreeMap<Path, F>,
}

impl<F: Field> PartialEq for Series<F> {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc
            && self.terms == other.terms
            && same_quiver(&self.quiver, &other.quiver)
    }
}

impl<F: Field> Eq for Series<F> {}

pub(crate) fn same_quiver(a: &Arc<Quiver>, b: &Arc<Quiver>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> Series<F> {
    pub fn zero(q: &Arc<Quiver>, trunc: usize) -> Self {
        Series {
            quiver: Arc::clone(q),
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_path(q: &Arc<Quiver>, trunc: usize, path: Path, coeff: F) -> Self {
        let mut s = Series::zero(q, trunc);
        s.add_term(path, coeff);
        s
    }

    pub fn idempotent(q: &Arc<Quiver>, trunc: usize, v: Vertex) -> Result<Self> {
        if !q.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(Series::from_path(q, trunc, Path::idempotent(v), F::one()))
    }

    /// The unit `sum_i e_i`.
    pub fn one(q: &Arc<Quiver>, trunc: usize) -> Self {
        let mut s = Series::zero(q, trunc);
        for &v in q.vertices() {
            s.add_term(Path::idempotent(v), F::one());
        }
        s
    }

    pub fn arrow(q: &Arc<Quiver>, trunc: usize, a: ArrowId) -> Self {
        Series::from_path(q, trunc, Path::arrow(q, a), F::one())
    }

    pub fn arrow_named(q: &Arc<Quiver>, trunc: usize, name: &str) -> Result<Self> {
        Ok(Series::arrow(q, trunc, q.arrow_id(name)?))
    }

    /// Path given by arrow names, leftmost first.
    pub fn path_named(q: &Arc<Quiver>, trunc: usize, names: &[&str]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|n| q.arrow_id(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Series::from_path(q, trunc, Path::new(q, ids)?, F::one()))
    }

    pub fn from_terms(
        q: &Arc<Quiver>,
        trunc: usize,
        terms: impl IntoIterator<Item = (Path, F)>,
    ) -> Self {
        let mut s = Series::zero(q, trunc);
        for (p, c) in terms {
            s.add_term(p, c);
        }
        s
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Path, F> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Path, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Path, F> {
        self.terms
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Path) -> F {
        self.terms.get(p).cloned().unwrap_or_else(F::zero)
    }

    /// Adds `coeff * path`, dropping it above the truncation degree.
    pub fn add_term(&mut self, path: Path, coeff: F) {
        if path.degree() > self.trunc || coeff.is_zero() {
            return;
        }
        match self.terms.entry(path) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_quiver(&self.quiver, &other.quiver) {
            return Err(Error::QuiverMismatch);
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check(other)?;
        for (p, c) in &other.terms {
            self.add_term(p.clone(), c.clone());
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &F, other: &Self) -> Result<()> {
        self.check(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (p, x) in &other.terms {
            self.add_term(p.clone(), c.mul(x));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Series::zero(&self.quiver, self.trunc);
        if c.is_zero() {
            return out;
        }
        for (p, x) in &self.terms {
            out.terms.insert(p.clone(), x.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_bounded(other, self.trunc))
    }

    /// Product keeping only terms of degree at most `max_deg` (and `N`).
    /// Operands must already be known compatible.
    pub(crate) fn mul_bounded(&self, other: &Self, max_deg: usize) -> Self {
        let bound = max_deg.min(self.trunc);
        let mut out = Series::zero(&self.quiver, self.trunc);
        for (p, x) in &self.terms {
            if p.degree() > bound {
                break;
            }
            for (r, y) in &other.terms {
                if p.degree() + r.degree() > bound {
                    break;
                }
                if let Some(pr) = p.compose(r) {
                    out.add_term(pr, x.mul(y));
                }
            }
        }
        out
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous(&self, d: usize) -> Self {
        self.filter(|p| p.degree() == d)
    }

    /// Terms whose path satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Path) -> bool) -> Self {
        Series {
            quiver: Arc::clone(&self.quiver),
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// `e_i * self * e_j`.
    pub fn bigraded(&self, i: Vertex, j: Vertex) -> Self {
        self.filter(|p| p.head() == i && p.tail() == j)
    }

    /// Lowest degree present, `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(Path::degree)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Path::degree)
    }

    /// Whether every term lies in `m^n`.
    pub fn in_m_power(&self, n: usize) -> bool {
        self.order().is_none_or(|d| d >= n)
    }

    /// Same terms under a different truncation degree. Lowering drops the
    /// terms above the new degree; raising is only meaningful when the
    /// caller knows the series is exact.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        Series {
            quiver: Arc::clone(&self.quiver),
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.degree() <= trunc)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the series over an identical quiver held by another `Arc`.
    pub fn rebind(&self, q: &Arc<Quiver>) -> Result<Self> {
        if !same_quiver(&self.quiver, q) {
            return Err(Error::QuiverMismatch);
        }
        Ok(Series {
            quiver: Arc::clone(q),
            trunc: self.trunc,
            terms: self.terms.clone(),
        })
    }
}

/// All paths of degree `1..=max_deg` (or `0..=max_deg` with idempotents),
/// sorted by the path order.
pub fn all_paths(q: &Quiver, max_deg: usize, with_idempotents: bool) -> Vec<Path> {
    let mut out = Vec::new();
    if with_idempotents {
        out.extend(q.vertices().iter().map(|&v| Path::idempotent(v)));
    }
    let mut layer: Vec<Path> = q.arrow_ids().map(|a| Path::arrow(q, a)).collect();
    for _ in 1..=max_deg {
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for p in &layer {
            for a in q.arrow_ids() {
                if q.head(a) == p.tail() {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(Path {
                        head: p.head,
                        tail: q.tail(a),
                        arrows,
                    });
                }
            }
        }
        layer = next;
    }
    out.sort();
    out
}

/// Paths from `tail` to `head` with degree in `lo..=hi`.
pub fn paths_between(q: &Quiver, tail: Vertex, head: Vertex, lo: usize, hi: usize) -> Vec<Path> {
    all_paths(q, hi, true)
        .into_iter()
        .filter(|p| p.tail() == tail && p.head() == head && p.degree() >= lo)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use proptest::prelude::*;

    type S = Series<Rational>;

    fn two_arrows() -> Arc<Quiver> {
        Arc::new(Quiver::from_triples(&[1, 2], &[("a", 1, 2), ("b", 2, 1)]).unwrap())
    }

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn idempotents_act_on_arrows() {
        let qv = two_arrows();
        let a = S::arrow_named(&qv, 5, "a").unwrap();
        let e1 = S::idempotent(&qv, 5, 1).unwrap();
        let e2 = S::idempotent(&qv, 5, 2).unwrap();
        assert_eq!(a.mul(&e1).unwrap(), a);
        assert_eq!(e2.mul(&a).unwrap(), a);
        assert!(e1.mul(&a).unwrap().is_zero());
        assert_eq!(S::one(&qv, 5).mul(&a).unwrap(), a);
    }

    #[test]
    fn abab() {
        let qv = two_arrows();
        let ab = S::path_named(&qv, 6, &["a", "b"]).unwrap();
        let abab = S::path_named(&qv, 6, &["a", "b", "a", "b"]).unwrap();
        assert_eq!(ab.mul(&ab).unwrap(), abab);
        // Truncation drops everything above N.
        let ab3 = ab.with_trunc(3);
        assert!(ab3.mul(&ab3).unwrap().is_zero());
    }

    #[test]
    fn non_composable_terms_vanish() {
        let qv = Arc::new(
            Quiver::from_triples(&[1, 2, 3], &[("a", 2, 3), ("b", 1, 3), ("c", 1, 2)]).unwrap(),
        );
        let a = S::arrow_named(&qv, 4, "a").unwrap();
        let b = S::arrow_named(&qv, 4, "b").unwrap();
        let c = S::arrow_named(&qv, 4, "c").unwrap();
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        assert_eq!(lhs, S::path_named(&qv, 4, &["a", "c"]).unwrap());
    }

    #[test]
    fn mismatches_are_errors() {
        let qv = two_arrows();
        let a = S::arrow_named(&qv, 5, "a").unwrap();
        let b = S::arrow_named(&qv, 4, "b").unwrap();
        assert_eq!(a.mul(&b), Err(Error::TruncationMismatch(5, 4)));
        let other = Arc::new(Quiver::from_triples(&[1, 2], &[("x", 1, 2)]).unwrap());
        let x = S::arrow_named(&other, 5, "x").unwrap();
        assert_eq!(a.add(&x), Err(Error::QuiverMismatch));
    }

    #[test]
    fn cancellation_removes_terms() {
        let qv = two_arrows();
        let a = S::arrow_named(&qv, 3, "a").unwrap();
        assert!(a.sub(&a).unwrap().is_zero());
        assert!(a.scale(&q(0)).is_zero());
    }

    #[test]
    fn path_enumeration() {
        let qv = two_arrows();
        // Degree d contributes two paths (alternating words) for every d >= 1.
        assert_eq!(all_paths(&qv, 4, false).len(), 8);
        assert_eq!(all_paths(&qv, 4, true).len(), 10);
        assert_eq!(paths_between(&qv, 1, 1, 0, 4).len(), 3);
    }

    fn arb_series(qv: Arc<Quiver>, n: usize) -> impl Strategy<Value = S> {
        let paths = all_paths(&qv, n, true);
        prop::collection::vec((0..paths.len(), -3i64..=3), 0..6).prop_map(move |ts| {
            S::from_terms(
                &qv,
                n,
                ts.into_iter().map(|(i, c)| (paths[i].clone(), q(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn mul_is_associative(
            x in arb_series(two_arrows(), 5),
            y in arb_series(two_arrows(), 5),
            z in arb_series(two_arrows(), 5),
        ) {
            let l = x.mul(&y).unwrap().mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn mul_distributes(
            x in arb_series(two_arrows(), 5),
            y in arb_series(two_arrows(), 5),
            z in arb_series(two_arrows(), 5),
        ) {
            let l = x.mul(&y.add(&z).unwrap()).unwrap();
            let r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn unit_is_neutral(x in arb_series(two_arrows(), 5)) {
            let one = S::one(x.quiver(), 5);
            prop_assert_eq!(one.mul(&x).unwrap(), x.clone());
            prop_assert_eq!(x.mul(&one).unwrap(), x);
        }
    }
}
