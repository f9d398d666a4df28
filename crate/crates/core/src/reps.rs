//! Decorated representations of quivers with potential.
//!
//! A representation stores one matrix per arrow, of shape
//! `dim M_{h(a)} x dim M_{t(a)}`, plus the dimensions of the decoration
//! spaces `V_i`, which carry no action.
//!
//! Text format:
//!
//! ```text
//! vertex 1: m=1 v=0
//! vertex 2: m=2 v=0
//! arrow a: 2x1 = 1 ; 0
//! ```
//!
//! Rows are separated by `;`, entries by whitespace. Arrows without a line
//! act by zero.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobian::{jacobian_generators, Qp};
use crate::linalg::Matrix;
use crate::quiver::{ArrowId, Quiver, Vertex};
use crate::series::Series;
use crate::substitution::ArrowSubstitution;

/// Per-vertex `(dim M_i, dim V_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimVector {
    pub vertices: Vec<Vertex>,
    pub m: Vec<usize>,
    pub v: Vec<usize>,
}

impl DimVector {
    pub fn m_total(&self) -> usize {
        self.m.iter().sum()
    }

    pub fn total(&self) -> usize {
        self.m_total() + self.v.iter().sum::<usize>()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .m
            .iter()
            .zip(&self.v)
            .map(|(m, v)| format!("({m},{v})"))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Some product of arrows never vanishes.
    NotNilpotent,
    /// `∂_a S` does not act by zero.
    Relation { arrow: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotNilpotent => write!(f, "the arrow action is not nilpotent"),
            Violation::Relation { arrow } => write!(f, "relation ∂_{arrow} S does not act by zero"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecoratedRep<F> {
    qp: Qp<F>,
    m_dims: Vec<usize>,
    v_dims: Vec<usize>,
    action: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for DecoratedRep<F> {
    fn eq(&self, other: &Self) -> bool {
        self.qp == other.qp
            && self.m_dims == other.m_dims
            && self.v_dims == other.v_dims
            && self.action == other.action
    }
}

impl<F: Field> DecoratedRep<F> {
    /// Dimensions are indexed like `qp.quiver().vertices()`, matrices like
    /// its arrows.
    pub fn new(
        qp: &Qp<F>,
        m_dims: Vec<usize>,
        v_dims: Vec<usize>,
        action: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let q = qp.quiver();
        let nv = q.vertices().len();
        if m_dims.len() != nv || v_dims.len() != nv {
            return Err(Error::Representation(format!(
                "expected {nv} vertex dimensions"
            )));
        }
        if action.len() != q.num_arrows() {
            return Err(Error::Representation(format!(
                "expected {} arrow matrices, got {}",
                q.num_arrows(),
                action.len()
            )));
        }
        for a in q.arrow_ids() {
            let want = (
                m_dims[q.vertex_index(q.head(a))?],
                m_dims[q.vertex_index(q.tail(a))?],
            );
            if action[a.index()].shape() != want {
                return Err(Error::Representation(format!(
                    "arrow `{}` has shape {:?}, expected {:?}",
                    q.name(a),
                    action[a.index()].shape(),
                    want
                )));
            }
        }
        Ok(DecoratedRep {
            qp: qp.clone(),
            m_dims,
            v_dims,
            action,
        })
    }

    /// Representation given by named matrices; unnamed arrows act by zero.
    pub fn from_named(
        qp: &Qp<F>,
        m_dims: &[usize],
        v_dims: &[usize],
        named: &[(&str, Matrix<F>)],
    ) -> Result<Self> {
        let q = qp.quiver();
        let mut action = zero_action(q, m_dims)?;
        for (name, m) in named {
            action[q.arrow_id(name)?.index()] = m.clone();
        }
        DecoratedRep::new(qp, m_dims.to_vec(), v_dims.to_vec(), action)
    }

    pub fn zero(qp: &Qp<F>) -> Self {
        let n = qp.quiver().vertices().len();
        DecoratedRep::from_named(qp, &vec![0; n], &vec![0; n], &[]).expect("zero rep")
    }

    /// `S_k`: `dim M_i = δ_ik`, no decoration, zero action.
    pub fn simple(qp: &Qp<F>, k: Vertex) -> Result<Self> {
        let i = qp.quiver().vertex_index(k)?;
        let mut m = vec![0; qp.quiver().vertices().len()];
        m[i] = 1;
        let v = vec![0; m.len()];
        DecoratedRep::from_named(qp, &m, &v, &[])
    }

    /// `S_k^-`: `M = 0`, `dim V_i = δ_ik`.
    pub fn negative_simple(qp: &Qp<F>, k: Vertex) -> Result<Self> {
        let i = qp.quiver().vertex_index(k)?;
        let mut v = vec![0; qp.quiver().vertices().len()];
        v[i] = 1;
        let m = vec![0; v.len()];
        DecoratedRep::from_named(qp, &m, &v, &[])
    }

    pub fn qp(&self) -> &Qp<F> {
        &self.qp
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.qp.quiver()
    }

    pub fn m_dims(&self) -> &[usize] {
        &self.m_dims
    }

    pub fn v_dims(&self) -> &[usize] {
        &self.v_dims
    }

    pub fn m_dim(&self, v: Vertex) -> Result<usize> {
        Ok(self.m_dims[self.quiver().vertex_index(v)?])
    }

    pub fn v_dim(&self, v: Vertex) -> Result<usize> {
        Ok(self.v_dims[self.quiver().vertex_index(v)?])
    }

    pub fn action(&self, a: ArrowId) -> &Matrix<F> {
        &self.action[a.index()]
    }

    pub fn action_named(&self, name: &str) -> Result<&Matrix<F>> {
        Ok(self.action(self.quiver().arrow_id(name)?))
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.action
    }

    /// Replaces one arrow matrix (same shape required).
    pub fn with_action(&self, a: ArrowId, m: Matrix<F>) -> Result<Self> {
        let mut action = self.action.clone();
        action[a.index()] = m;
        DecoratedRep::new(&self.qp, self.m_dims.clone(), self.v_dims.clone(), action)
    }

    /// Same data at another truncation degree of the potential.
    pub fn with_qp(&self, qp: &Qp<F>) -> Result<Self> {
        if **qp.quiver() != **self.quiver() {
            return Err(Error::QuiverMismatch);
        }
        DecoratedRep::new(
            qp,
            self.m_dims.clone(),
            self.v_dims.clone(),
            self.action.clone(),
        )
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector {
            vertices: self.quiver().vertices().to_vec(),
            m: self.m_dims.clone(),
            v: self.v_dims.clone(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dim_vector().total()
    }

    /// Offset of `M_i` inside `M = ⊕ M_i`.
    pub fn offset(&self, v: Vertex) -> Result<usize> {
        let i = self.quiver().vertex_index(v)?;
        Ok(self.m_dims[..i].iter().sum())
    }

    pub fn is_positive(&self) -> bool {
        self.v_dims.iter().all(|&d| d == 0)
    }

    /// Block `e_head x e_tail` of the action of `x`, a
    /// `dim M_head x dim M_tail` matrix.
    pub fn evaluate_block(&self, x: &Series<F>, head: Vertex, tail: Vertex) -> Result<Matrix<F>> {
        let q = self.quiver();
        if **x.quiver() != **q {
            return Err(Error::QuiverMismatch);
        }
        let (mh, mt) = (self.m_dim(head)?, self.m_dim(tail)?);
        let mut out = Matrix::zeros(mh, mt);
        if mh == 0 || mt == 0 {
            return Ok(out);
        }
        for (p, c) in x.iter() {
            if p.head() != head || p.tail() != tail {
                continue;
            }
            if let Some(m) = self.path_action(p.arrows(), head)? {
                out = out.add(&m.scale(c))?;
            }
        }
        Ok(out)
    }

    /// `a1 a2 ... ad` acting on `M`; `None` when some partial product is zero.
    fn path_action(&self, arrows: &[ArrowId], head: Vertex) -> Result<Option<Matrix<F>>> {
        let mut acc: Matrix<F> = Matrix::identity(self.m_dim(head)?);
        for a in arrows {
            acc = acc.mul(self.action(*a))?;
            if acc.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(acc))
    }

    /// Action of `x` on `M = ⊕ M_i` as one square matrix.
    pub fn evaluate(&self, x: &Series<F>) -> Result<Matrix<F>> {
        let q = self.quiver();
        let total: usize = self.m_dims.iter().sum();
        let mut out = Matrix::zeros(total, total);
        for &h in q.vertices() {
            for &t in q.vertices() {
                let block = self.evaluate_block(x, h, t)?;
                out.set_block(self.offset(h)?, self.offset(t)?, &block);
            }
        }
        Ok(out)
    }

    /// Action of arrow `a` embedded in `End(M)`.
    fn global_arrow(&self, a: ArrowId) -> Matrix<F> {
        let q = self.quiver();
        let total: usize = self.m_dims.iter().sum();
        let mut out = Matrix::zeros(total, total);
        let h = self.offset(q.head(a)).expect("vertex");
        let t = self.offset(q.tail(a)).expect("vertex");
        out.set_block(h, t, self.action(a));
        out
    }

    /// Least `n` such that every path of length `n` acts by zero, or `None`
    /// if the action is not nilpotent.
    pub fn nilpotency_degree(&self) -> Option<usize> {
        let total: usize = self.m_dims.iter().sum();
        let arrows: Vec<Matrix<F>> = self
            .quiver()
            .arrow_ids()
            .map(|a| self.global_arrow(a))
            .collect();
        // Span of the images of all paths of length n, as columns.
        let mut span: Matrix<F> = Matrix::identity(total);
        for n in 0..=total {
            if span.cols() == 0 || span.is_zero() {
                return Some(n);
            }
            let parts: Vec<Matrix<F>> = arrows
                .iter()
                .map(|a| a.mul(&span).expect("shapes"))
                .collect();
            let refs: Vec<&Matrix<F>> = parts.iter().collect();
            span = Matrix::hstack(&refs, total).image();
        }
        None
    }

    /// Checks nilpotency and that every `∂_a S` acts by zero.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.nilpotency_degree().is_none() {
            return Err(Violation::NotNilpotent);
        }
        let q = self.quiver();
        for (a, d) in jacobian_generators(&self.qp) {
            // ∂_a S lies in e_{t(a)} A e_{h(a)}.
            let block = self
                .evaluate_block(&d, q.tail(a), q.head(a))
                .expect("same quiver");
            if !block.is_zero() {
                return Err(Violation::Relation {
                    arrow: q.name(a).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Blockwise direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.qp != other.qp {
            return Err(Error::QuiverMismatch);
        }
        let add = |x: &[usize], y: &[usize]| x.iter().zip(y).map(|(a, b)| a + b).collect();
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| x.direct_sum(y))
            .collect();
        DecoratedRep::new(
            &self.qp,
            add(&self.m_dims, &other.m_dims),
            add(&self.v_dims, &other.v_dims),
            action,
        )
    }

    /// Representation of `target` in which each arrow `y` acts by
    /// `φ(y)` evaluated on `self`, where `φ` maps `target`'s quiver into this
    /// one. The truncation of `φ` must reach the nilpotency degree.
    pub fn pullback(&self, target: &Qp<F>, phi: &ArrowSubstitution<F>) -> Result<Self> {
        if **phi.to_quiver() != **self.quiver() || **phi.from_quiver() != **target.quiver() {
            return Err(Error::QuiverMismatch);
        }
        let need = self
            .nilpotency_degree()
            .ok_or_else(|| Error::Representation("action is not nilpotent".into()))?;
        if phi.trunc() + 1 < need {
            return Err(Error::TruncationShortfall {
                have: phi.trunc(),
                need: need.saturating_sub(1),
            });
        }
        let tq = target.quiver();
        let action = tq
            .arrow_ids()
            .map(|y| {
                let img = phi.image(y).rebind(self.quiver())?;
                self.evaluate_block(&img, tq.head(y), tq.tail(y))
            })
            .collect::<Result<Vec<_>>>()?;
        DecoratedRep::new(target, self.m_dims.clone(), self.v_dims.clone(), action)
    }

    /// Moves the spaces along a vertex bijection; `target`'s quiver must be
    /// this quiver with vertices renamed by `map`.
    pub fn relabel_vertices(&self, target: &Qp<F>, map: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        let q = self.quiver();
        if *target.quiver().as_ref() != q.relabel_vertices(&map)? {
            return Err(Error::QuiverMismatch);
        }
        let tq = target.quiver();
        let mut m = vec![0; tq.vertices().len()];
        let mut v = vec![0; tq.vertices().len()];
        for (i, &x) in q.vertices().iter().enumerate() {
            let j = tq.vertex_index(map(x))?;
            m[j] = self.m_dims[i];
            v[j] = self.v_dims[i];
        }
        DecoratedRep::new(target, m, v, self.action.clone())
    }
}

fn zero_action<F: Field>(q: &Quiver, m_dims: &[usize]) -> Result<Vec<Matrix<F>>> {
    if m_dims.len() != q.vertices().len() {
        return Err(Error::Representation(
            "wrong number of vertex dimensions".into(),
        ));
    }
    q.arrow_ids()
        .map(|a| {
            Ok(Matrix::zeros(
                m_dims[q.vertex_index(q.head(a))?],
                m_dims[q.vertex_index(q.tail(a))?],
            ))
        })
        .collect()
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isomorphism<F> {
    /// Invertible intertwiner, one matrix per vertex (`M_1 -> M_2`).
    Isomorphic(Vec<Matrix<F>>),
    /// Proved non-isomorphic, with the reason.
    NotIsomorphic(String),
    /// The search found no invertible intertwiner but did not prove that
    /// none exists.
    NoIsomorphismFound,
}

impl<F> Isomorphism<F> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Isomorphism::Isomorphic(_))
    }

    pub fn is_proved_non_isomorphic(&self) -> bool {
        matches!(self, Isomorphism::NotIsomorphic(_))
    }
}

/// Basis of `Hom(r1, r2)`, each element one matrix per vertex.
pub fn hom_basis<F: Field>(
    r1: &DecoratedRep<F>,
    r2: &DecoratedRep<F>,
) -> Result<Vec<Vec<Matrix<F>>>> {
    if **r1.quiver() != **r2.quiver() {
        return Err(Error::QuiverMismatch);
    }
    let q = r1.quiver();
    let nv = q.vertices().len();
    // Unknown ψ_i is m2_i x m1_i, stored row-major from offset[i].
    let mut offset = Vec::with_capacity(nv);
    let mut unknowns = 0;
    for i in 0..nv {
        offset.push(unknowns);
        unknowns += r2.m_dims[i] * r1.m_dims[i];
    }
    let var = |i: usize, r: usize, c: usize| offset[i] + r * r1.m_dims[i] + c;
    let mut rows: Vec<Vec<F>> = Vec::new();
    for a in q.arrow_ids() {
        let h = q.vertex_index(q.head(a))?;
        let t = q.vertex_index(q.tail(a))?;
        let (a1, a2) = (r1.action(a), r2.action(a));
        // ψ_h a1 - a2 ψ_t = 0, entry (r, c) of an m2_h x m1_t matrix.
        for r in 0..r2.m_dims[h] {
            for c in 0..r1.m_dims[t] {
                let mut row = vec![F::zero(); unknowns];
                for s in 0..r1.m_dims[h] {
                    let k = var(h, r, s);
                    row[k] = row[k].add(a1.get(s, c));
                }
                for s in 0..r2.m_dims[t] {
                    let k = var(t, s, c);
                    row[k] = row[k].sub(a2.get(r, s));
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(unknowns)
    } else {
        Matrix::from_rows(rows)?.kernel()
    };
    Ok((0..kernel.cols())
        .map(|j| {
            (0..nv)
                .map(|i| {
                    let mut m = Matrix::zeros(r2.m_dims[i], r1.m_dims[i]);
                    for r in 0..r2.m_dims[i] {
                        for c in 0..r1.m_dims[i] {
                            m.set(r, c, kernel.get(var(i, r, c), j).clone());
                        }
                    }
                    m
                })
                .collect()
        })
        .collect())
}

pub fn hom_dim<F: Field>(r1: &DecoratedRep<F>, r2: &DecoratedRep<F>) -> Result<usize> {
    Ok(hom_basis(r1, r2)?.len())
}

/// `End(M) = K`, which forces `M` indecomposable.
pub fn is_brick<F: Field>(r: &DecoratedRep<F>) -> Result<bool> {
    Ok(hom_dim(r, r)? == 1)
}

/// Budget on determinant evaluations per search phase.
const SEARCH_BUDGET: u64 = 20_000;
/// Random points tried per radius in the final phase.
const POINTS_PER_RADIUS: usize = 64;
const RADII: [i64; 4] = [3, 10, 100, 1000];

fn combine<F: Field>(basis: &[Vec<Matrix<F>>], coeffs: &[i64]) -> Vec<Matrix<F>> {
    let mut out: Vec<Matrix<F>> = basis[0]
        .iter()
        .map(|m| Matrix::zeros(m.rows(), m.cols()))
        .collect();
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let c = F::from_i64(c);
        for (o, m) in out.iter_mut().zip(b) {
            *o = o.add(&m.scale(&c)).expect("same shape");
        }
    }
    out
}

fn invertible<F: Field>(psi: &[Matrix<F>]) -> bool {
    psi.iter().all(|m| m.rows() == 0 || !m.det().is_zero())
}

/// Every point of `values^d` in lexicographic order, or `None` if the grid
/// exceeds the budget.
fn grid_points(values: &[i64], d: usize) -> Option<impl Iterator<Item = Vec<i64>> + '_> {
    let size = (values.len() as u64).checked_pow(d as u32)?;
    if size > SEARCH_BUDGET {
        return None;
    }
    Some((0..size).map(move |mut idx| {
        let mut p = vec![0; d];
        for slot in p.iter_mut().rev() {
            *slot = values[(idx % values.len() as u64) as usize];
            idx /= values.len() as u64;
        }
        p
    }))
}

/// Decides whether two decorated representations of the same QP are
/// isomorphic.
///
/// Solves the intertwiner system and looks for an invertible element of
/// `Hom(M_1, M_2)` in this fixed order: single basis vectors and their sum,
/// the grid `{-2..2}^d`, the grid `{0..D}^d` where `D = dim M` bounds the
/// degree of the determinant polynomial, then seeded random points of
/// growing radius. Non-isomorphism is proved by dimension vectors, by
/// `dim Hom(M_1, M_2) != dim End(M_1)`, or by a full grid with more than `D`
/// values per coordinate on which the determinant vanishes.
pub fn is_isomorphic<F: Field>(
    r1: &DecoratedRep<F>,
    r2: &DecoratedRep<F>,
) -> Result<Isomorphism<F>> {
    if **r1.quiver() != **r2.quiver() {
        return Err(Error::QuiverMismatch);
    }
    if r1.dim_vector() != r2.dim_vector() {
        return Ok(Isomorphism::NotIsomorphic(format!(
            "dimension vectors differ: {} vs {}",
            r1.dim_vector(),
            r2.dim_vector()
        )));
    }
    let basis = hom_basis(r1, r2)?;
    let deg: usize = r1.m_dims.iter().sum();
    if deg == 0 {
        return Ok(Isomorphism::Isomorphic(Vec::new()).fill_empty(r1));
    }
    if basis.is_empty() {
        return Ok(Isomorphism::NotIsomorphic("no nonzero intertwiners".into()));
    }
    let end1 = hom_dim(r1, r1)?;
    let end2 = hom_dim(r2, r2)?;
    if basis.len() != end1 || end1 != end2 {
        return Ok(Isomorphism::NotIsomorphic(format!(
            "dim Hom(M1,M2) = {}, dim End(M1) = {end1}, dim End(M2) = {end2}",
            basis.len()
        )));
    }
    let d = basis.len();
    let try_point = |c: &[i64]| {
        let psi = combine(&basis, c);
        invertible(&psi).then_some(psi)
    };
    for j in 0..d {
        let mut c = vec![0; d];
        c[j] = 1;
        if let Some(w) = try_point(&c) {
            return Ok(Isomorphism::Isomorphic(w));
        }
    }
    if let Some(w) = try_point(&vec![1; d]) {
        return Ok(Isomorphism::Isomorphic(w));
    }
    // A polynomial of total degree D vanishing on S^d with |S| > D is zero.
    let char_ok =
        |values: usize| F::characteristic() == 0 || (values as u64) <= F::characteristic();
    let small: Vec<i64> = (-2..=2).collect();
    if let Some(points) = grid_points(&small, d) {
        for c in points {
            if let Some(w) = try_point(&c) {
                return Ok(Isomorphism::Isomorphic(w));
            }
        }
        if deg < small.len() && char_ok(small.len()) {
            return Ok(Isomorphism::NotIsomorphic(
                "every intertwiner on the grid {-2..2} is singular".into(),
            ));
        }
    }
    let wide: Vec<i64> = (0..=deg as i64).collect();
    if char_ok(wide.len()) {
        if let Some(points) = grid_points(&wide, d) {
            for c in points {
                if let Some(w) = try_point(&c) {
                    return Ok(Isomorphism::Isomorphic(w));
                }
            }
            return Ok(Isomorphism::NotIsomorphic(format!(
                "every intertwiner on the grid {{0..{deg}}} is singular"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for r in RADII {
        for _ in 0..POINTS_PER_RADIUS {
            let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-r..=r)).collect();
            if let Some(w) = try_point(&c) {
                return Ok(Isomorphism::Isomorphic(w));
            }
        }
    }
    Ok(Isomorphism::NoIsomorphismFound)
}

impl<F: Field> Isomorphism<F> {
    fn fill_empty(self, r: &DecoratedRep<F>) -> Self {
        match self {
            Isomorphism::Isomorphic(w) if w.is_empty() => {
                Isomorphism::Isomorphic(r.m_dims.iter().map(|&m| Matrix::identity(m)).collect())
            }
            other => other,
        }
    }
}

/// Writes the representation text format.
pub fn format_rep<F: Field>(r: &DecoratedRep<F>) -> String {
    let q = r.quiver();
    let mut out = String::new();
    for (i, v) in q.vertices().iter().enumerate() {
        out.push_str(&format!(
            "vertex {v}: m={} v={}\n",
            r.m_dims[i], r.v_dims[i]
        ));
    }
    for a in q.arrow_ids() {
        let m = r.action(a);
        let rows: Vec<String> = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        out.push_str(&format!(
            "arrow {}: {}x{} = {}\n",
            q.name(a),
            m.rows(),
            m.cols(),
            rows.join(" ; ")
        ));
    }
    out
}

/// Reads the representation text format over `qp`.
pub fn parse_rep<F: Field>(qp: &Qp<F>, src: &str) -> Result<DecoratedRep<F>> {
    let q = qp.quiver();
    let nv = q.vertices().len();
    let mut m_dims = vec![0; nv];
    let mut v_dims = vec![0; nv];
    let mut named: Vec<(String, Matrix<F>)> = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |m: &str| Error::Parse(format!("line {}: {m}", lineno + 1));
        let (head, rest) = line.split_once(':').ok_or_else(|| bad("expected `:`"))?;
        let mut words = head.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("vertex"), Some(v), None) => {
                let v: Vertex = v.parse().map_err(|_| bad("bad vertex"))?;
                let i = q.vertex_index(v)?;
                for field in rest.split_whitespace() {
                    let (k, val) = field
                        .split_once('=')
                        .ok_or_else(|| bad("expected `m=` or `v=`"))?;
                    let val: usize = val.parse().map_err(|_| bad("bad dimension"))?;
                    match k {
                        "m" => m_dims[i] = val,
                        "v" => v_dims[i] = val,
                        _ => return Err(bad("expected `m=` or `v=`")),
                    }
                }
            }
            (Some("arrow"), Some(name), None) => {
                let (shape, body) = rest
                    .split_once('=')
                    .ok_or_else(|| bad("expected `RxC = ...`"))?;
                let (r, c) = shape
                    .trim()
                    .split_once('x')
                    .ok_or_else(|| bad("bad shape"))?;
                let r: usize = r.trim().parse().map_err(|_| bad("bad row count"))?;
                let c: usize = c.trim().parse().map_err(|_| bad("bad column count"))?;
                let mut rows = Vec::with_capacity(r);
                if r > 0 {
                    for row in body.split(';') {
                        let entries = row
                            .split_whitespace()
                            .map(F::parse)
                            .collect::<Result<Vec<_>>>()?;
                        if entries.len() != c {
                            return Err(bad("row length does not match the shape"));
                        }
                        rows.push(entries);
                    }
                }
                if rows.len() != r {
                    return Err(bad("row count does not match the shape"));
                }
                let m = if c == 0 || r == 0 {
                    Matrix::zeros(r, c)
                } else {
                    Matrix::from_rows(rows)?
                };
                named.push((name.to_string(), m));
            }
            _ => return Err(bad("expected `vertex V:` or `arrow NAME:`")),
        }
    }
    let refs: Vec<(&str, Matrix<F>)> = named.iter().map(|(n, m)| (n.as_str(), m.clone())).collect();
    DecoratedRep::from_named(qp, &m_dims, &v_dims, &refs)
}
