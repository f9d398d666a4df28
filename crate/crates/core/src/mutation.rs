//! B-matrices, premutation, reduction to a trivial plus reduced part, and
//! mutation of quivers with potential.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobian::Qp;
use crate::linalg::Matrix;
use crate::potential::{canonical_rotation, Potential};
use crate::quiver::{Arrow, ArrowId, Quiver, Vertex};
use crate::series::{all_paths, Path, Series};
use crate::substitution::ArrowSubstitution;

/// Marker appended to an arrow name to form its dual.
pub const DUAL_MARK: char = '⋆';

/// `x ↦ x⋆` and `x⋆ ↦ x`.
pub fn dual_name(name: &str) -> String {
    match name.strip_suffix(DUAL_MARK) {
        Some(base) => base.to_string(),
        None => format!("{name}{DUAL_MARK}"),
    }
}

/// Name of the composite `b a` through the mutated vertex.
pub fn composite_name(b: &str, a: &str) -> String {
    format!("[{b}.{a}]")
}

/// Skew-symmetric exchange matrix indexed by the vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BMatrix {
    pub vertices: Vec<Vertex>,
    pub entries: Vec<Vec<i64>>,
}

impl BMatrix {
    pub fn new(vertices: Vec<Vertex>, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = vertices.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParams("B-matrix must be square".into()));
        }
        Ok(BMatrix { vertices, entries })
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    fn index(&self, v: Vertex) -> Result<usize> {
        self.vertices
            .iter()
            .position(|&w| w == v)
            .ok_or(Error::UnknownVertex(v))
    }

    pub fn get(&self, i: Vertex, j: Vertex) -> Result<i64> {
        Ok(self.entries[self.index(i)?][self.index(j)?])
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == -self.entries[j][i]))
    }

    /// Matrix mutation at `k`.
    pub fn mutate(&self, k: Vertex) -> Result<Self> {
        let kk = self.index(k)?;
        let b = &self.entries;
        let n = self.size();
        let pos = |x: i64| x.max(0);
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = if i == kk || j == kk {
                    -b[i][j]
                } else {
                    b[i][j] + pos(b[i][kk]) * pos(b[kk][j]) - pos(-b[i][kk]) * pos(-b[kk][j])
                };
            }
        }
        Ok(BMatrix {
            vertices: self.vertices.clone(),
            entries: out,
        })
    }

    /// Quiver with `[b_ij]_+` arrows `j -> i`, named `x<i>_<j>_<n>`.
    pub fn to_quiver(&self) -> Result<Quiver> {
        let mut arrows = Vec::new();
        for (i, &vi) in self.vertices.iter().enumerate() {
            for (j, &vj) in self.vertices.iter().enumerate() {
                for n in 0..self.entries[i][j].max(0) {
                    arrows.push(Arrow::new(format!("x{vi}_{vj}_{n}"), vj, vi));
                }
            }
        }
        Quiver::new(self.vertices.clone(), arrows)
    }
}

impl fmt::Display for BMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.entries.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `b_ij = #(arrows j -> i) - #(arrows i -> j)`.
pub fn b_matrix(q: &Quiver) -> BMatrix {
    let count = q.arrow_counts();
    let n = q.vertices().len();
    let entries = (0..n)
        .map(|i| (0..n).map(|j| count[i][j] - count[j][i]).collect())
        .collect();
    BMatrix {
        vertices: q.vertices().to_vec(),
        entries,
    }
}

/// Where each arrow of the premutated quiver comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrowOrigin {
    /// An arrow not incident to `k`, carried over unchanged.
    Kept(ArrowId),
    /// The reversal of an arrow incident to `k`.
    Dual(ArrowId),
    /// The composite `b a` of an arrow `a` into `k` and `b` out of `k`.
    Composite { b: ArrowId, a: ArrowId },
}

/// `μ̃_k(Q, S)` together with the bookkeeping tying it to the input.
#[derive(Clone, Debug)]
pub struct Premutation<F> {
    pub vertex: Vertex,
    pub source: Qp<F>,
    pub qp: Qp<F>,
    /// `[S]`: the input potential with through-`k` factors collapsed,
    /// written over the premutated quiver.
    pub collapsed: Series<F>,
    /// Origin of every arrow of the premutated quiver, in its arrow order.
    pub origin: Vec<ArrowOrigin>,
    /// Arrows into `k` (the `a_p`), in arrow order of the input.
    pub incoming: Vec<ArrowId>,
    /// Arrows out of `k` (the `b_q`), in arrow order of the input.
    pub outgoing: Vec<ArrowId>,
}

impl<F: Field> Premutation<F> {
    /// Premutated arrow id of `x⋆` for an input arrow `x` incident to `k`.
    pub fn dual_of(&self, x: ArrowId) -> ArrowId {
        self.find(&ArrowOrigin::Dual(x))
    }

    pub fn composite_of(&self, b: ArrowId, a: ArrowId) -> ArrowId {
        self.find(&ArrowOrigin::Composite { b, a })
    }

    pub fn kept(&self, x: ArrowId) -> ArrowId {
        self.find(&ArrowOrigin::Kept(x))
    }

    fn find(&self, o: &ArrowOrigin) -> ArrowId {
        ArrowId(
            self.origin
                .iter()
                .position(|x| x == o)
                .expect("known origin") as u32,
        )
    }

    pub fn composite_names(&self) -> Vec<String> {
        self.names_where(|o| matches!(o, ArrowOrigin::Composite { .. }))
    }

    pub fn dual_names(&self) -> Vec<String> {
        self.names_where(|o| matches!(o, ArrowOrigin::Dual(_)))
    }

    fn names_where(&self, pred: impl Fn(&ArrowOrigin) -> bool) -> Vec<String> {
        self.origin
            .iter()
            .enumerate()
            .filter(|(_, o)| pred(o))
            .map(|(i, _)| self.qp.quiver().name(ArrowId(i as u32)).to_string())
            .collect()
    }
}

/// Rotates a cycle so that its head vertex differs from `k`.
fn rotate_off(q: &Quiver, p: &Path, k: Vertex) -> Path {
    (0..p.degree())
        .map(|i| p.rotate(q, i))
        .find(|r| r.head() != k)
        .unwrap_or_else(|| p.clone())
}

fn check_mutable<F: Field>(qp: &Qp<F>, k: Vertex) -> Result<()> {
    let q = qp.quiver();
    if !q.has_vertex(k) {
        return Err(Error::UnknownVertex(k));
    }
    q.ensure_loop_free()?;
    if q.on_two_cycle(k) {
        return Err(Error::TwoCycleThroughVertex(k));
    }
    Ok(())
}

/// `μ̃_k`: reverse arrows at `k`, add composites, `S̃ = [S] + Σ [b.a] a⋆ b⋆`.
pub fn premutate<F: Field>(qp: &Qp<F>, k: Vertex) -> Result<Premutation<F>> {
    check_mutable(qp, k)?;
    let q = qp.quiver();
    let n = qp.trunc();
    let incoming = q.incoming(k);
    let outgoing = q.outgoing(k);

    let mut arrows = Vec::new();
    let mut origin = Vec::new();
    for a in q.arrow_ids() {
        let x = q.arrow(a);
        if x.head == k || x.tail == k {
            arrows.push(Arrow::new(dual_name(&x.name), x.head, x.tail));
            origin.push(ArrowOrigin::Dual(a));
        } else {
            arrows.push(x.clone());
            origin.push(ArrowOrigin::Kept(a));
        }
    }
    for &b in &outgoing {
        for &a in &incoming {
            arrows.push(Arrow::new(
                composite_name(q.name(b), q.name(a)),
                q.tail(a),
                q.head(b),
            ));
            origin.push(ArrowOrigin::Composite { b, a });
        }
    }
    let new_q = Arc::new(Quiver::new(q.vertices().to_vec(), arrows)?);
    let id_of = |o: &ArrowOrigin| ArrowId(origin.iter().position(|x| x == o).unwrap() as u32);

    // [S]
    let mut collapsed = Series::zero(&new_q, n);
    for (p, c) in qp.potential().series().iter() {
        let p = rotate_off(q, p, k);
        let src = p.arrows();
        let mut ids = Vec::with_capacity(src.len());
        let mut i = 0;
        while i < src.len() {
            if q.tail(src[i]) == k {
                // src[i] leaves k, src[i+1] enters it (the path never starts at k).
                ids.push(id_of(&ArrowOrigin::Composite {
                    b: src[i],
                    a: src[i + 1],
                }));
                i += 2;
            } else {
                ids.push(id_of(&ArrowOrigin::Kept(src[i])));
                i += 1;
            }
        }
        collapsed.add_term(Path::new(&new_q, ids)?, c.clone());
    }

    // Δ_k
    let mut total = collapsed.clone();
    for &b in &outgoing {
        for &a in &incoming {
            let ids = vec![
                id_of(&ArrowOrigin::Composite { b, a }),
                id_of(&ArrowOrigin::Dual(a)),
                id_of(&ArrowOrigin::Dual(b)),
            ];
            total.add_term(Path::new(&new_q, ids)?, F::one());
        }
    }
    Ok(Premutation {
        vertex: k,
        source: qp.clone(),
        qp: Qp::new(&total)?,
        collapsed,
        origin,
        incoming,
        outgoing,
    })
}

/// Splitting of a QP into trivial and reduced parts.
#[derive(Clone, Debug)]
pub struct ReductionResult<F> {
    /// The input QP.
    pub input: Qp<F>,
    /// `(A_red, S_red)` on the arrows not used by trivial pairs.
    pub reduced: Qp<F>,
    /// `(a_k, b_k)` with `S_triv = Σ a_k b_k`, as arrow ids of the input quiver.
    pub trivial_pairs: Vec<(ArrowId, ArrowId)>,
    /// Reduced arrow `i` is input arrow `reduced_arrows[i]`.
    pub reduced_arrows: Vec<ArrowId>,
    /// `S_triv + S_red`, written over the input quiver.
    pub split_potential: Potential<F>,
    /// `θ` with `θ(S_triv + S_red)` cyclically equivalent to `S` modulo `m^{N+1}`.
    pub equivalence: ArrowSubstitution<F>,
    /// `θ⁻¹`, carrying `S` to `S_triv + S_red`.
    pub normalization: ArrowSubstitution<F>,
    /// Whether every opposite-arrow pairing block has full rank, i.e. the
    /// reduced quiver has no 2-cycles coming from the input's 2-cycles.
    pub pairing_full_rank: bool,
}

impl<F: Field> ReductionResult<F> {
    pub fn trivial_pair_names(&self) -> Vec<(String, String)> {
        let q = self.input.quiver();
        self.trivial_pairs
            .iter()
            .map(|&(a, b)| (q.name(a).to_string(), q.name(b).to_string()))
            .collect()
    }
}

/// Row/column elimination of a pairing block: returns `(E, G, pivots)` with
/// `E X G` the partial permutation matrix with ones at `pivots`.
fn normalize_pairing<F: Field>(x: &Matrix<F>) -> (Matrix<F>, Matrix<F>, Vec<(usize, usize)>) {
    let (nr, nc) = x.shape();
    let mut m = x.clone();
    let mut e = Matrix::<F>::identity(nr);
    let mut g = Matrix::<F>::identity(nc);
    let mut used_r = vec![false; nr];
    let mut used_c = vec![false; nc];
    let mut pivots = Vec::new();
    loop {
        // Smallest row with a nonzero entry in a free column, then smallest column.
        let found = (0..nr).filter(|&r| !used_r[r]).find_map(|r| {
            (0..nc)
                .filter(|&c| !used_c[c])
                .find(|&c| !m.get(r, c).is_zero())
                .map(|c| (r, c))
        });
        let Some((r, c)) = found else { break };
        let inv = m.get(r, c).inv().expect("nonzero pivot");
        for j in 0..nc {
            let v = m.get(r, j).mul(&inv);
            m.set(r, j, v);
        }
        for j in 0..nr {
            let v = e.get(r, j).mul(&inv);
            e.set(r, j, v);
        }
        for i in 0..nr {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..nc {
                let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                m.set(i, j, v);
            }
            for j in 0..nr {
                let v = e.get(i, j).sub(&f.mul(e.get(r, j)));
                e.set(i, j, v);
            }
        }
        for j in 0..nc {
            if j == c {
                continue;
            }
            let f = m.get(r, j).clone();
            if f.is_zero() {
                continue;
            }
            for i in 0..nr {
                let v = m.get(i, j).sub(&f.mul(m.get(i, c)));
                m.set(i, j, v);
            }
            for i in 0..nc {
                let v = g.get(i, j).sub(&f.mul(g.get(i, c)));
                g.set(i, j, v);
            }
        }
        used_r[r] = true;
        used_c[c] = true;
        pivots.push((r, c));
    }
    (e, g, pivots)
}

/// Splits a QP into `(A_triv, S_triv) ⊕ (A_red, S_red)` up to right-equivalence.
pub fn split<F: Field>(qp: &Qp<F>) -> Result<ReductionResult<F>> {
    let q = Arc::clone(qp.quiver());
    let n = qp.trunc();
    let s2 = qp.potential().quadratic_part();

    // Stage 1: normalize the degree-2 part with a change of arrows.
    let mut lin_images: Vec<Series<F>> = q.arrow_ids().map(|a| Series::arrow(&q, n, a)).collect();
    let mut pairs: Vec<(ArrowId, ArrowId)> = Vec::new();
    let mut full_rank = true;
    let verts = q.vertices();
    for (ii, &i) in verts.iter().enumerate() {
        for &j in &verts[ii + 1..] {
            let p_arrows = q.arrows_between(i, j);
            let q_arrows = q.arrows_between(j, i);
            if p_arrows.is_empty() || q_arrows.is_empty() {
                continue;
            }
            let mut x = Matrix::zeros(p_arrows.len(), q_arrows.len());
            for (pi, &pa) in p_arrows.iter().enumerate() {
                for (qi, &qa) in q_arrows.iter().enumerate() {
                    let cyc = canonical_rotation(&q, &Path::new(&q, vec![pa, qa])?);
                    x.set(pi, qi, s2.series().coeff(&cyc));
                }
            }
            let (e, g, pivots) = normalize_pairing(&x);
            full_rank &= pivots.len() == p_arrows.len().min(q_arrows.len());
            // ψ0(P_p) = Σ_k E_kp P_k and ψ0(Q_q) = Σ_l G_ql Q_l.
            for (pi, &pa) in p_arrows.iter().enumerate() {
                let mut img = Series::zero(&q, n);
                for (ki, &ka) in p_arrows.iter().enumerate() {
                    img.add_term(Path::arrow(&q, ka), e.get(ki, pi).clone());
                }
                lin_images[pa.index()] = img;
            }
            for (qi, &qa) in q_arrows.iter().enumerate() {
                let mut img = Series::zero(&q, n);
                for (li, &la) in q_arrows.iter().enumerate() {
                    img.add_term(Path::arrow(&q, la), g.get(qi, li).clone());
                }
                lin_images[qa.index()] = img;
            }
            for (r, c) in pivots {
                pairs.push((p_arrows[r], q_arrows[c]));
            }
        }
    }
    pairs.sort();
    let mut psi = ArrowSubstitution::new(&q, &q, n, lin_images)?;
    let mut s = psi.apply_potential(qp.potential())?;

    // Stage 2: kill the mixed terms a_k u_k + v_k b_k.
    let mut role: BTreeMap<ArrowId, (usize, bool)> = BTreeMap::new();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        role.insert(a, (k, true));
        role.insert(b, (k, false));
    }
    for _ in 0..=n + 1 {
        let mut u: Vec<Series<F>> = vec![Series::zero(&q, n); pairs.len()];
        let mut v: Vec<Series<F>> = vec![Series::zero(&q, n); pairs.len()];
        let mut dirty = false;
        for (p, c) in s.series().iter() {
            if p.degree() <= 2 {
                continue;
            }
            let arrows = p.arrows();
            let a_pos = arrows
                .iter()
                .position(|x| matches!(role.get(x), Some((_, true))));
            if let Some(i) = a_pos {
                let (k, _) = role[&arrows[i]];
                let r = p.rotate(&q, i);
                u[k].add_term(r.slice(&q, 1, r.degree()), c.clone());
                dirty = true;
                continue;
            }
            let b_pos = arrows
                .iter()
                .position(|x| matches!(role.get(x), Some((_, false))));
            if let Some(i) = b_pos {
                let (k, _) = role[&arrows[i]];
                // rotate so the b-arrow is last
                let r = p.rotate(&q, (i + 1) % p.degree());
                v[k].add_term(r.slice(&q, 0, r.degree() - 1), c.clone());
                dirty = true;
            }
        }
        if !dirty {
            break;
        }
        let mut images: Vec<Series<F>> = q.arrow_ids().map(|a| Series::arrow(&q, n, a)).collect();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            images[a.index()] = images[a.index()].sub(&v[k])?;
            images[b.index()] = images[b.index()].sub(&u[k])?;
        }
        let phi = ArrowSubstitution::new(&q, &q, n, images)?;
        s = phi.apply_potential(&s)?;
        psi = phi.compose(&psi)?;
    }

    // Assemble the reduced QP.
    let trivial: Vec<ArrowId> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let reduced_arrows: Vec<ArrowId> = q.arrow_ids().filter(|a| !trivial.contains(a)).collect();
    let red_q = Arc::new(Quiver::new(
        q.vertices().to_vec(),
        reduced_arrows.iter().map(|&a| q.arrow(a).clone()).collect(),
    )?);
    let mut new_id = vec![None; q.num_arrows()];
    for (i, a) in reduced_arrows.iter().enumerate() {
        new_id[a.index()] = Some(ArrowId(i as u32));
    }
    let mut s_red = Series::zero(&red_q, n);
    for (p, c) in s.series().iter() {
        if p.degree() == 2 && p.arrows().iter().all(|a| trivial.contains(a)) {
            continue;
        }
        let ids: Option<Vec<ArrowId>> = p.arrows().iter().map(|a| new_id[a.index()]).collect();
        match ids {
            Some(ids) => s_red.add_term(Path::new(&red_q, ids)?, c.clone()),
            None => {
                // Only reachable if the iteration cap was hit.
                return Err(Error::InvalidParams("reduction did not converge".into()));
            }
        }
    }
    let equivalence = psi.invert()?;
    Ok(ReductionResult {
        input: qp.clone(),
        reduced: Qp::new(&s_red)?,
        trivial_pairs: pairs,
        reduced_arrows,
        split_potential: s,
        equivalence,
        normalization: psi,
        pairing_full_rank: full_rank,
    })
}

/// Full mutation `μ_k = (μ̃_k)_red`.
#[derive(Clone, Debug)]
pub struct MutationResult<F> {
    pub vertex: Vertex,
    pub premutation: Premutation<F>,
    pub reduction: ReductionResult<F>,
    pub mutated: Qp<F>,
    /// The mutated quiver has an oriented 2-cycle.
    pub degenerate: bool,
}

impl<F: Field> MutationResult<F> {
    pub fn premutated(&self) -> &Qp<F> {
        &self.premutation.qp
    }
}

/// Mutation at `k`; fails if `k` lies on a 2-cycle.
pub fn mutate<F: Field>(qp: &Qp<F>, k: Vertex) -> Result<MutationResult<F>> {
    let premutation = premutate(qp, k)?;
    let reduction = split(&premutation.qp)?;
    let mutated = reduction.reduced.clone();
    let degenerate = !mutated.quiver().is_two_acyclic();
    Ok(MutationResult {
        vertex: k,
        premutation,
        reduction,
        mutated,
        degenerate,
    })
}

/// Why a mutation sequence stopped early.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halt {
    /// 1-based index of the step that could not be applied.
    pub step: usize,
    pub vertex: Vertex,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct SequenceOutcome<F> {
    pub results: Vec<MutationResult<F>>,
    pub halt: Option<Halt>,
}

impl<F: Field> SequenceOutcome<F> {
    /// Every requested step ran and every intermediate quiver is 2-acyclic.
    pub fn nondegenerate(&self) -> bool {
        self.halt.is_none() && self.results.iter().all(|r| !r.degenerate)
    }

    /// The QP after the last successful step.
    pub fn last(&self) -> Option<&Qp<F>> {
        self.results.last().map(|r| &r.mutated)
    }
}

/// Applies `μ_{ks[0]}`, then `μ_{ks[1]}`, and so on; stops at the first
/// vertex that lies on a 2-cycle of the current QP.
pub fn mutate_sequence<F: Field>(qp: &Qp<F>, ks: &[Vertex]) -> Result<SequenceOutcome<F>> {
    for w in ks.windows(2) {
        if w[0] == w[1] {
            return Err(Error::RepeatedVertex(w[0]));
        }
    }
    let mut cur = qp.clone();
    let mut results = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        if !cur.quiver().has_vertex(k) {
            return Err(Error::UnknownVertex(k));
        }
        if cur.quiver().on_two_cycle(k) {
            return Ok(SequenceOutcome {
                results,
                halt: Some(Halt {
                    step: i + 1,
                    vertex: k,
                    reason: format!("vertex {k} lies on an oriented 2-cycle"),
                }),
            });
        }
        let r = mutate(&cur, k)?;
        cur = r.mutated.clone();
        results.push(r);
    }
    Ok(SequenceOutcome {
        results,
        halt: None,
    })
}

/// One nonzero coefficient per rotation class of cycles of degree
/// `2..=max_deg`, drawn from `[-1000, 1000]` with a seeded generator.
pub fn random_potential<F: Field>(
    q: &Arc<Quiver>,
    max_deg: usize,
    trunc: usize,
    seed: u64,
) -> Result<Qp<F>> {
    q.ensure_loop_free()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Series::zero(q, trunc);
    for p in all_paths(q, max_deg.min(trunc), false) {
        if p.is_cycle() && canonical_rotation(q, &p) == p {
            let mut c = 0i64;
            while c == 0 {
                c = rng.gen_range(-1000..=1000);
            }
            s.add_term(p, F::from_i64(c));
        }
    }
    Qp::new(&s)
}

/// Searches seeds `seed, seed+1, ...` for a potential that stays
/// nondegenerate along `ks`.
pub fn find_nondegenerate<F: Field>(
    q: &Arc<Quiver>,
    ks: &[Vertex],
    max_deg: usize,
    trunc: usize,
    seed: u64,
    attempts: usize,
) -> Result<Option<(u64, Qp<F>)>> {
    for s in seed..seed + attempts as u64 {
        let qp = random_potential::<F>(q, max_deg, trunc, s)?;
        if mutate_sequence(&qp, ks)?.nondegenerate() {
            return Ok(Some((s, qp)));
        }
    }
    Ok(None)
}

/// Cap on the relabelings tried by [`find_signed_matching`].
const MATCHING_BUDGET: usize = 200_000;

/// Looks for a vertex-fixing substitution `φ` from `x`'s quiver to `y`'s
/// that sends every arrow to `±` a parallel arrow, bijectively, with
/// `φ(S_x)` equal to `S_y`. Name-preserving choices are tried first.
pub fn find_signed_matching<F: Field>(
    x: &Qp<F>,
    y: &Qp<F>,
) -> Result<Option<ArrowSubstitution<F>>> {
    let (qx, qy) = (x.quiver(), y.quiver());
    if qx.vertices() != qy.vertices() || qx.arrow_counts() != qy.arrow_counts() {
        return Ok(None);
    }
    let n = x.trunc().min(y.trunc());
    let (sx, sy) = (x.potential().with_trunc(n), y.potential().with_trunc(n));

    // Parallel classes of x, with the candidates in y ordered by name agreement.
    let mut classes: Vec<(Vec<ArrowId>, Vec<ArrowId>)> = Vec::new();
    for a in qx.arrow_ids() {
        let key = (qx.tail(a), qx.head(a));
        if classes
            .iter()
            .any(|(xs, _)| (qx.tail(xs[0]), qx.head(xs[0])) == key)
        {
            continue;
        }
        let xs = qx.arrows_between(key.0, key.1);
        let mut ys = qy.arrows_between(key.0, key.1);
        ys.sort_by_key(|&b| {
            let pos = xs.iter().position(|&a| qx.name(a) == qy.name(b));
            (pos.is_none(), pos)
        });
        classes.push((xs, ys));
    }
    let mut class_options: Vec<Vec<Vec<(ArrowId, ArrowId, bool)>>> = Vec::new();
    let mut total: usize = 1;
    for (xs, ys) in &classes {
        let mut opts = Vec::new();
        for perm in permutations(ys.len()) {
            for signs in 0..(1usize << xs.len()) {
                opts.push(
                    xs.iter()
                        .enumerate()
                        .map(|(i, &a)| (a, ys[perm[i]], signs >> i & 1 == 1))
                        .collect(),
                );
            }
        }
        total = total.saturating_mul(opts.len());
        class_options.push(opts);
    }
    if total > MATCHING_BUDGET {
        return Err(Error::InvalidParams(format!(
            "{total} candidate relabelings exceed the search budget"
        )));
    }
    let mut idx = vec![0usize; class_options.len()];
    loop {
        let mut images = vec![Series::zero(qy, n); qx.num_arrows()];
        for (c, &i) in class_options.iter().zip(&idx) {
            for &(a, b, neg) in &c[i] {
                let s = Series::arrow(qy, n, b);
                images[a.index()] = if neg { s.neg() } else { s };
            }
        }
        let phi = ArrowSubstitution::new(qx, qy, n, images)?;
        if phi.apply_potential(&sx)? == sy {
            return Ok(Some(phi));
        }
        // Odometer over the class options.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < class_options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}
