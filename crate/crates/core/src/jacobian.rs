//! Quivers with potential, truncated Jacobian ideals and the invariants
//! computed from them.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{EchelonBasis, SparseVec};
use crate::potential::{canonical_rotation, derivative, Potential};
use crate::quiver::{Arrow, ArrowId, Quiver, Vertex};
use crate::series::{all_paths, Path, Series};
use crate::text;

/// A loop-free quiver with a canonical potential in `m^2`, truncated at `N`.
#[derive(Clone, Debug)]
pub struct Qp<F> {
    quiver: Arc<Quiver>,
    potential: Potential<F>,
}

impl<F: Field> PartialEq for Qp<F> {
    fn eq(&self, other: &Self) -> bool {
        *self.quiver == *other.quiver && self.potential == other.potential
    }
}

impl<F: Field> Eq for Qp<F> {}

impl<F: Field> Qp<F> {
    pub fn new(potential: &Series<F>) -> Result<Self> {
        let quiver = Arc::clone(potential.quiver());
        quiver.ensure_loop_free()?;
        let potential = Potential::new(potential)?;
        Ok(Qp { quiver, potential })
    }

    pub fn from_potential(potential: Potential<F>) -> Result<Self> {
        let quiver = Arc::clone(potential.quiver());
        quiver.ensure_loop_free()?;
        Ok(Qp { quiver, potential })
    }

    /// Parses the QP text format.
    pub fn parse(src: &str, default_trunc: usize, override_trunc: Option<usize>) -> Result<Self> {
        let t = text::parse_qp_text::<F>(src, default_trunc, override_trunc)?;
        Qp::new(&t.potential)
    }

    pub fn to_text(&self) -> String {
        text::format_qp_text(&self.quiver, self.potential.series())
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential<F> {
        &self.potential
    }

    pub fn trunc(&self) -> usize {
        self.potential.trunc()
    }

    /// Same QP viewed at another truncation degree.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        Qp {
            quiver: Arc::clone(&self.quiver),
            potential: self.potential.with_trunc(trunc),
        }
    }

    /// Parses a series over this QP's quiver at its truncation degree.
    pub fn series(&self, src: &str) -> Result<Series<F>> {
        text::parse_series(&self.quiver, self.trunc(), src)
    }

    pub fn is_reduced(&self) -> bool {
        self.potential.quadratic_part().is_zero()
    }
}

/// `a ↦ ∂_a S` in arrow order.
pub fn jacobian_generators<F: Field>(qp: &Qp<F>) -> Vec<(ArrowId, Series<F>)> {
    qp.quiver
        .arrow_ids()
        .map(|a| (a, derivative(a, &qp.potential)))
        .collect()
}

fn to_sparse<F: Field>(x: &Series<F>) -> SparseVec<Path, F> {
    x.terms().clone()
}

fn from_sparse<F: Field>(q: &Arc<Quiver>, trunc: usize, v: &SparseVec<Path, F>) -> Series<F> {
    Series::from_terms(q, trunc, v.iter().map(|(p, c)| (p.clone(), c.clone())))
}

/// Echelon basis of `J(S)` modulo `m^{N+1}`, leading terms = smallest paths.
#[derive(Clone, Debug)]
pub struct TruncatedIdealBasis<F> {
    quiver: Arc<Quiver>,
    trunc: usize,
    basis: EchelonBasis<Path, F>,
}

impl<F: Field> TruncatedIdealBasis<F> {
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leading_paths(&self) -> impl Iterator<Item = &Path> {
        self.basis.leading_keys()
    }

    pub fn elements(&self) -> Vec<Series<F>> {
        self.basis
            .vectors()
            .map(|(_, v)| from_sparse(&self.quiver, self.trunc, v))
            .collect()
    }

    /// Normal form of `x` modulo the ideal.
    pub fn reduce(&self, x: &Series<F>) -> Series<F> {
        from_sparse(&self.quiver, self.trunc, &self.basis.reduce(to_sparse(x)))
    }

    pub fn contains(&self, x: &Series<F>) -> bool {
        self.basis.contains(to_sparse(x))
    }

    /// Number of leading paths of each degree `0..=N` whose endpoints pass `keep`.
    fn leading_counts(&self, keep: &dyn Fn(&Path) -> bool) -> Vec<usize> {
        let mut counts = vec![0; self.trunc + 1];
        for p in self.basis.leading_keys() {
            if keep(p) {
                counts[p.degree()] += 1;
            }
        }
        counts
    }

    /// Whether both ideals agree degreewise (same span).
    pub fn same_span(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .basis
                .vectors()
                .all(|(_, v)| other.basis.contains(v.clone()))
    }
}

/// Closed span of all `u · ∂_a S · v` modulo `m^{N+1}`.
pub fn ideal_truncated<F: Field>(qp: &Qp<F>) -> TruncatedIdealBasis<F> {
    ideal_from_generators(
        &qp.quiver,
        qp.trunc(),
        jacobian_generators(qp).into_iter().map(|(_, g)| g),
    )
}

/// Two-sided ideal generated by bigraded-homogeneous elements.
pub fn ideal_from_generators<F: Field>(
    q: &Arc<Quiver>,
    trunc: usize,
    gens: impl IntoIterator<Item = Series<F>>,
) -> TruncatedIdealBasis<F> {
    let mut basis: EchelonBasis<Path, F> = EchelonBasis::new();
    let mut queue: VecDeque<Series<F>> = VecDeque::new();
    let arrows: Vec<Series<F>> = q.arrow_ids().map(|a| Series::arrow(q, trunc, a)).collect();
    let push =
        |basis: &mut EchelonBasis<Path, F>, queue: &mut VecDeque<Series<F>>, x: Series<F>| {
            if x.is_zero() {
                return;
            }
            let r = basis.reduce(to_sparse(&x));
            if !r.is_empty() {
                let s = from_sparse(q, trunc, &r);
                basis.insert(r);
                queue.push_back(s);
            }
        };
    for g in gens {
        // Split into endpoint components so every stored vector is bigraded.
        for &i in q.vertices() {
            for &j in q.vertices() {
                push(&mut basis, &mut queue, g.bigraded(i, j));
            }
        }
    }
    while let Some(x) = queue.pop_front() {
        for a in &arrows {
            push(&mut basis, &mut queue, a.mul(&x).expect("same quiver"));
            push(&mut basis, &mut queue, x.mul(a).expect("same quiver"));
        }
    }
    TruncatedIdealBasis {
        quiver: Arc::clone(q),
        trunc,
        basis,
    }
}

/// Per-degree dimensions of a truncated quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub dims: Vec<usize>,
    /// Lowest degree reported (0 for algebras, 1 for deformation spaces).
    pub first_degree: usize,
    pub stabilized: bool,
    pub characteristic: u64,
}

impl DimReport {
    fn new(dims: Vec<usize>, first_degree: usize, trunc: usize, characteristic: u64) -> Self {
        let window = trunc.div_ceil(3);
        let stabilized = dims.iter().rev().take(window).all(|&d| d == 0);
        DimReport {
            dims,
            first_degree,
            stabilized,
            characteristic,
        }
    }

    pub fn trunc(&self) -> usize {
        self.first_degree + self.dims.len() - 1
    }

    pub fn dim_at(&self, degree: usize) -> usize {
        degree
            .checked_sub(self.first_degree)
            .and_then(|i| self.dims.get(i).copied())
            .unwrap_or(0)
    }

    /// Sum of the truncated dims (a lower bound unless stabilized).
    pub fn truncated_total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Total dimension, known only when stabilized.
    pub fn total(&self) -> Option<usize> {
        self.stabilized.then(|| self.truncated_total())
    }

    /// Lowest degree with a nonzero dimension.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.dims
            .iter()
            .position(|&d| d > 0)
            .map(|i| i + self.first_degree)
    }
}

impl fmt::Display for DimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree  dim")?;
        for (i, d) in self.dims.iter().enumerate() {
            writeln!(f, "{:>6}  {}", i + self.first_degree, d)?;
        }
        match self.total() {
            Some(t) => write!(f, " total  {t} (stabilized)"),
            None => write!(
                f,
                " total  >= {} (not stabilized at degree {})",
                self.truncated_total(),
                self.trunc()
            ),
        }
    }
}

fn quotient_report<F: Field>(
    qp: &Qp<F>,
    ideal: &TruncatedIdealBasis<F>,
    keep: &dyn Fn(&Path) -> bool,
) -> DimReport {
    let n = qp.trunc();
    let mut dims = vec![0usize; n + 1];
    for p in all_paths(&qp.quiver, n, true) {
        if keep(&p) {
            dims[p.degree()] += 1;
        }
    }
    for (d, c) in ideal.leading_counts(keep).into_iter().enumerate() {
        dims[d] -= c;
    }
    DimReport::new(dims, 0, n, F::characteristic())
}

/// Dimensions of the associated graded of `P(A,S)` truncated at `N`.
pub fn jacobian_dim<F: Field>(qp: &Qp<F>) -> DimReport {
    let ideal = ideal_truncated(qp);
    quotient_report(qp, &ideal, &|_| true)
}

/// Dimensions of `ē_k P(A,S) ē_k` (paths with neither endpoint at `k`).
pub fn kk_dim<F: Field>(qp: &Qp<F>, k: Vertex) -> Result<DimReport> {
    if !qp.quiver.has_vertex(k) {
        return Err(Error::UnknownVertex(k));
    }
    let ideal = ideal_truncated(qp);
    Ok(quotient_report(qp, &ideal, &|p| {
        p.head() != k && p.tail() != k
    }))
}

/// Cyclic classes modulo the cyclic part of `J(S)`, degree by degree.
#[derive(Clone, Debug)]
pub struct DeformationSpace<F> {
    quiver: Arc<Quiver>,
    trunc: usize,
    relations: EchelonBasis<Path, F>,
    classes: Vec<Path>,
}

impl<F: Field> DeformationSpace<F> {
    pub fn compute(qp: &Qp<F>) -> Self {
        let q = &qp.quiver;
        let n = qp.trunc();
        let paths = all_paths(q, n, false);
        let classes: Vec<Path> = paths
            .iter()
            .filter(|p| p.is_cycle() && canonical_rotation(q, p) == **p)
            .cloned()
            .collect();
        let mut relations = EchelonBasis::new();
        for (a, g) in jacobian_generators(qp) {
            let Some(order) = g.order() else { continue };
            if order >= n {
                continue;
            }
            let parallel = paths.iter().filter(|w| {
                w.tail() == q.tail(a) && w.head() == q.head(a) && w.degree() <= n - order
            });
            for w in parallel {
                let wg = Series::from_path(q, n, w.clone(), F::one())
                    .mul(&g)
                    .expect("same quiver");
                let cyc = Potential::cyclic_part(&wg);
                if !cyc.is_zero() {
                    relations.insert(to_sparse(cyc.series()));
                }
            }
        }
        DeformationSpace {
            quiver: Arc::clone(q),
            trunc: n,
            relations,
            classes,
        }
    }

    pub fn report(&self) -> DimReport {
        let mut dims = vec![0usize; self.trunc];
        for c in &self.classes {
            if !self.relations.is_leading(c) {
                dims[c.degree() - 1] += 1;
            }
        }
        DimReport::new(dims, 1, self.trunc, F::characteristic())
    }

    /// Whether the class of the cyclic series `x` is nonzero.
    pub fn survives(&self, x: &Series<F>) -> Result<bool> {
        let canon = Potential::new(x)?;
        Ok(!self.relations.contains(to_sparse(canon.series())))
    }

    /// Surviving cycle classes (normal-form basis), lowest first.
    pub fn basis_cycles(&self) -> Vec<Series<F>> {
        self.classes
            .iter()
            .filter(|c| !self.relations.is_leading(c))
            .map(|c| Series::from_path(&self.quiver, self.trunc, c.clone(), F::one()))
            .collect()
    }
}

pub fn deformation_dim<F: Field>(qp: &Qp<F>) -> DimReport {
    DeformationSpace::compute(qp).report()
}

/// Outcome of a rigidity test.
#[derive(Clone, Debug)]
pub struct Rigidity<F> {
    pub rigid: bool,
    pub stabilized: bool,
    pub report: DimReport,
    /// Lowest surviving cycle class when not rigid.
    pub witness: Option<Series<F>>,
}

impl<F: Field> Rigidity<F> {
    pub fn witness_degree(&self) -> Option<usize> {
        self.witness.as_ref().and_then(Series::order)
    }
}

pub fn is_rigid<F: Field>(qp: &Qp<F>) -> Rigidity<F> {
    let space = DeformationSpace::compute(qp);
    let report = space.report();
    let witness = space.basis_cycles().into_iter().next();
    Rigidity {
        rigid: report.truncated_total() == 0 && report.stabilized,
        stabilized: report.stabilized,
        report,
        witness,
    }
}

/// Full sub-QP on `keep`: other arrows are sent to zero.
pub fn restrict<F: Field>(qp: &Qp<F>, keep: &[Vertex]) -> Result<Qp<F>> {
    let (sub, old) = qp.quiver.full_subquiver(keep)?;
    let sub = Arc::new(sub);
    let mut new_id = vec![None; qp.quiver.num_arrows()];
    for (i, a) in old.iter().enumerate() {
        new_id[a.index()] = Some(ArrowId(i as u32));
    }
    let mut s = Series::zero(&sub, qp.trunc());
    for (p, c) in qp.potential.series().iter() {
        let ids: Option<Vec<ArrowId>> = p.arrows().iter().map(|a| new_id[a.index()]).collect();
        if let Some(ids) = ids {
            s.add_term(Path::new(&sub, ids)?, c.clone());
        }
    }
    Qp::new(&s)
}

/// `(A ⊕ A', S + S')` over a common vertex set; arrow names must be disjoint.
pub fn direct_sum<F: Field>(x: &Qp<F>, y: &Qp<F>) -> Result<Qp<F>> {
    if x.quiver.vertices() != y.quiver.vertices() {
        return Err(Error::QuiverMismatch);
    }
    if x.trunc() != y.trunc() {
        return Err(Error::TruncationMismatch(x.trunc(), y.trunc()));
    }
    let mut arrows: Vec<Arrow> = x.quiver.arrows().to_vec();
    arrows.extend(y.quiver.arrows().iter().cloned());
    let q = Arc::new(Quiver::new(x.quiver.vertices().to_vec(), arrows)?);
    let shift = x.quiver.num_arrows() as u32;
    let mut s = Series::zero(&q, x.trunc());
    for (p, c) in x.potential.series().iter() {
        s.add_term(Path::new(&q, p.arrows().to_vec())?, c.clone());
    }
    for (p, c) in y.potential.series().iter() {
        let ids = p.arrows().iter().map(|a| ArrowId(a.0 + shift)).collect();
        s.add_term(Path::new(&q, ids)?, c.clone());
    }
    Qp::new(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn qp(src: &str, n: usize) -> Qp<Rational> {
        Qp::parse(src, n, None).unwrap()
    }

    const TRIANGLE: &str = "a: 1 -> 2\nb: 2 -> 3\nc: 3 -> 1\npotential: c.b.a\n";

    #[test]
    fn generators_of_triangle() {
        let t = qp(TRIANGLE, 5);
        let gens = jacobian_generators(&t);
        let printed: Vec<String> = gens.iter().map(|(_, g)| text::format_series(g)).collect();
        assert_eq!(printed, ["1 * c.b", "1 * a.c", "1 * b.a"]);
    }

    #[test]
    fn triangle_dims() {
        let t = qp(TRIANGLE, 9);
        let r = jacobian_dim(&t);
        assert_eq!(r.dims, vec![3, 3, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(r.total(), Some(6));
        assert_eq!(kk_dim(&t, 2).unwrap().total(), Some(3));
        assert!(kk_dim(&t, 7).is_err());
    }

    #[test]
    fn four_cycle_ideal_counts_monomials() {
        let t = qp(
            "a: 1 -> 2\nb: 2 -> 3\nc: 3 -> 4\nd: 4 -> 1\npotential: d.c.b.a\n",
            4,
        );
        let ideal = ideal_truncated(&t);
        // The relations are monomials, so the ideal is spanned by the paths
        // containing one of them.
        let relations = ["d.c.b", "a.d.c", "b.a.d", "c.b.a"];
        let q = t.quiver();
        let mut by_degree = [0usize; 5];
        for p in crate::series::all_paths(q, 4, false) {
            let word = text::format_path(q, &p);
            if relations.iter().any(|r| word.contains(r)) {
                by_degree[p.degree()] += 1;
            }
        }
        assert_eq!(by_degree, [0, 0, 0, 4, 4]);
        let mut leading = [0usize; 5];
        for p in ideal.leading_paths() {
            leading[p.degree()] += 1;
        }
        assert_eq!(leading, by_degree);
    }

    #[test]
    fn zero_potential_ideal_is_empty() {
        let t = qp("a: 1 -> 2\nb: 2 -> 3\n", 4);
        assert!(ideal_truncated(&t).is_empty());
        assert_eq!(jacobian_dim(&t).total(), Some(6));
        assert_eq!(kk_dim(&t, 2).unwrap().total(), Some(3));
        assert!(is_rigid(&t).rigid);
    }

    #[test]
    fn trivial_potential_leaves_idempotents() {
        let t = qp("a: 1 -> 2\nb: 2 -> 1\npotential: a.b\n", 6);
        assert_eq!(jacobian_dim(&t).total(), Some(2));
    }

    #[test]
    fn report_table() {
        let t = qp(TRIANGLE, 3);
        let r = jacobian_dim(&t);
        assert_eq!(
            r.to_string(),
            "degree  dim\n     0  3\n     1  3\n     2  0\n     3  0\n total  6 (stabilized)"
        );
    }

    #[test]
    fn rigidity_of_triangle_powers() {
        let t = qp(TRIANGLE, 9);
        let r = is_rigid(&t);
        assert!(r.rigid && r.stabilized);
        assert_eq!(r.report.truncated_total(), 0);
        let sq = qp(
            "a: 1 -> 2\nb: 2 -> 3\nc: 3 -> 1\npotential: c.b.a.c.b.a\n",
            9,
        );
        let r = is_rigid(&sq);
        assert!(!r.rigid);
        assert_eq!(r.report.total(), Some(1));
        assert_eq!(r.witness_degree(), Some(3));
    }

    #[test]
    fn zero_potential_on_cycle_is_not_rigid() {
        let t = qp("a: 1 -> 2\nb: 2 -> 3\nc: 3 -> 1\n", 6);
        let r = is_rigid(&t);
        assert!(!r.rigid);
        assert!(!jacobian_dim(&t).stabilized);
    }

    #[test]
    fn restriction_breaks_cycle() {
        let t = qp(TRIANGLE, 5);
        let r = restrict(&t, &[1, 2]).unwrap();
        assert_eq!(r.quiver().num_arrows(), 1);
        assert!(r.potential().is_zero());
        assert_eq!(restrict(&t, &[1, 2, 3]).unwrap(), t);
    }

    #[test]
    fn trivial_summand_keeps_dims() {
        let t = qp(TRIANGLE, 7);
        let triv = qp("vertices: 1 2 3\nx: 1 -> 2\ny: 2 -> 1\npotential: x.y\n", 7);
        let sum = direct_sum(&t, &triv).unwrap();
        assert_eq!(jacobian_dim(&sum).dims, jacobian_dim(&t).dims);
    }
}
