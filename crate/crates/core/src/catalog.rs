//! Built-in quivers with potential and representations: the standard small
//! examples, triangular grids, primitive potentials and band modules on the
//! double cyclic triangle.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobian::Qp;
use crate::linalg::Matrix;
use crate::mutation::mutate;
use crate::quiver::{Arrow, ArrowId, Quiver, Vertex};
use crate::rep_mutation::mutate_rep;
use crate::reps::DecoratedRep;
use crate::series::{Path, Series};
use crate::substitution::ArrowSubstitution;

/// Optional parameters of a catalog entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params<F> {
    /// Grid order.
    pub n: Option<usize>,
    /// Power-series coefficients, lowest degree first.
    pub coeffs: Option<Vec<F>>,
}

impl<F> Default for Params<F> {
    fn default() -> Self {
        Params {
            n: None,
            coeffs: None,
        }
    }
}

impl<F> Params<F> {
    pub fn with_n(n: usize) -> Self {
        Params {
            n: Some(n),
            coeffs: None,
        }
    }

    pub fn with_coeffs(coeffs: Vec<F>) -> Self {
        Params {
            n: None,
            coeffs: Some(coeffs),
        }
    }
}

/// One row of the catalog listing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "two_arrows",
        params: "coeffs (default 1)",
        description: "a: 1 -> 2, b: 2 -> 1 with S = sum x_n (a.b)^n",
    },
    CatalogEntry {
        name: "four_cycle",
        params: "",
        description: "oriented 4-cycle a, b, c, d with S = d.c.b.a",
    },
    CatalogEntry {
        name: "cyclic_triangle",
        params: "coeffs (default 1)",
        description: "oriented triangle with S = F(c.b.a), F = sum x_n t^n",
    },
    CatalogEntry {
        name: "double_triangle",
        params: "",
        description: "doubled triangle with S = c1.b1.a1 + c2.b2.a2",
    },
    CatalogEntry {
        name: "grid",
        params: "n >= 1 (default 1)",
        description: "triangular grid Q(n) with S = sum cba e_j - sum bca e_j",
    },
    CatalogEntry {
        name: "a3",
        params: "",
        description: "A3 path 1 -> 2 -> 3, S = 0",
    },
    CatalogEntry {
        name: "a3_sink",
        params: "",
        description: "A3 with 2 a sink, S = 0",
    },
    CatalogEntry {
        name: "a3_source",
        params: "",
        description: "A3 with 2 a source, S = 0",
    },
    CatalogEntry {
        name: "a3_reverse",
        params: "",
        description: "A3 path 3 -> 2 -> 1, S = 0",
    },
    CatalogEntry {
        name: "mu2_a3",
        params: "",
        description: "mutation of the A3 path at 2: triangle with S = b⋆.[b.a].a⋆",
    },
    CatalogEntry {
        name: "affine_a2",
        params: "",
        description: "a: 1 -> 2, b: 2 -> 3, c: 1 -> 3, S = 0",
    },
];

/// Names accepted by [`make_qp`].
pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

fn parse<F: Field>(src: &str, trunc: usize) -> Result<Qp<F>> {
    Qp::parse(src, trunc, Some(trunc))
}

fn power_series<F: Field>(cycle: &Series<F>, coeffs: &[F]) -> Result<Series<F>> {
    let mut out = Series::zero(cycle.quiver(), cycle.trunc());
    let mut power = cycle.clone();
    for c in coeffs {
        out.add_scaled(c, &power)?;
        power = power.mul(cycle)?;
    }
    Ok(out)
}

fn default_coeffs<F: Field>(p: &Params<F>) -> Vec<F> {
    p.coeffs.clone().unwrap_or_else(|| vec![F::one()])
}

pub fn two_arrows<F: Field>(coeffs: &[F], trunc: usize) -> Result<Qp<F>> {
    let q = Arc::new(Quiver::from_triples(&[1, 2], &[("a", 1, 2), ("b", 2, 1)])?);
    let ab = Series::path_named(&q, trunc, &["a", "b"])?;
    Qp::new(&power_series(&ab, coeffs)?)
}

pub fn four_cycle<F: Field>(trunc: usize) -> Result<Qp<F>> {
    parse(
        "a: 1 -> 2\nb: 2 -> 3\nc: 3 -> 4\nd: 4 -> 1\npotential: d.c.b.a\n",
        trunc,
    )
}

pub fn cyclic_triangle<F: Field>(coeffs: &[F], trunc: usize) -> Result<Qp<F>> {
    let q = Arc::new(Quiver::from_triples(
        &[1, 2, 3],
        &[("a", 1, 2), ("b", 2, 3), ("c", 3, 1)],
    )?);
    let cba = Series::path_named(&q, trunc, &["c", "b", "a"])?;
    Qp::new(&power_series(&cba, coeffs)?)
}

pub fn double_triangle<F: Field>(trunc: usize) -> Result<Qp<F>> {
    parse(
        "a1: 1 -> 2\na2: 1 -> 2\nb1: 2 -> 3\nb2: 2 -> 3\nc1: 3 -> 1\nc2: 3 -> 1\n\
         potential: c1.b1.a1 + c2.b2.a2\n",
        trunc,
    )
}

pub fn a3<F: Field>(trunc: usize) -> Result<Qp<F>> {
    parse("a: 1 -> 2\nb: 2 -> 3\n", trunc)
}

pub fn a3_sink<F: Field>(trunc: usize) -> Result<Qp<F>> {
    parse("a: 1 -> 2\nb: 3 -> 2\n", trunc)
}

pub fn a3_source<F: Field>(trunc: usize) -> Result<Qp<F>> {
    parse("a: 2 -> 1\nb: 2 -> 3\n", trunc)
}

pub fn a3_reverse<F: Field>(trunc: usize) -> Result<Qp<F>> {
    parse("a: 2 -> 1\nb: 3 -> 2\n", trunc)
}

pub fn mu2_a3<F: Field>(trunc: usize) -> Result<Qp<F>> {
    Ok(mutate(&a3::<F>(trunc)?, 2)?.mutated)
}

pub fn affine_a2<F: Field>(trunc: usize) -> Result<Qp<F>> {
    parse("a: 1 -> 2\nb: 2 -> 3\nc: 1 -> 3\n", trunc)
}

/// Vertex ids of the grid `Q(n)`: points `(p, q, r)` with `p + q + r = n`,
/// numbered from 1 with `p` descending, then `q` descending.
pub fn grid_points(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for p in (0..=n).rev() {
        for q in (0..=n - p).rev() {
            out.push((p, q, n - p - q));
        }
    }
    out
}

/// The triangular grid `Q(n)`. Arrows `a{v}`, `b{v}`, `c{v}` leave vertex
/// `v` in the directions `(-1,1,0)`, `(0,-1,1)`, `(1,0,-1)`.
pub fn grid<F: Field>(n: usize, trunc: usize) -> Result<Qp<F>> {
    if n == 0 {
        return Err(Error::InvalidParams("grid order must be at least 1".into()));
    }
    let pts = grid_points(n);
    let id: BTreeMap<(usize, usize, usize), Vertex> = pts
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as Vertex + 1))
        .collect();
    let step = |(p, q, r): (usize, usize, usize), d: [i64; 3]| -> Option<(usize, usize, usize)> {
        let x = (p as i64 + d[0], q as i64 + d[1], r as i64 + d[2]);
        (x.0 >= 0 && x.1 >= 0 && x.2 >= 0).then_some((x.0 as usize, x.1 as usize, x.2 as usize))
    };
    const DIRS: [(&str, [i64; 3]); 3] = [("a", [-1, 1, 0]), ("b", [0, -1, 1]), ("c", [1, 0, -1])];
    let mut arrows = Vec::new();
    let mut arrow_of = BTreeMap::new();
    for (kind, d) in DIRS {
        for &pt in &pts {
            if let Some(to) = step(pt, d) {
                arrow_of.insert((kind, pt), arrows.len());
                arrows.push(Arrow::new(format!("{kind}{}", id[&pt]), id[&pt], id[&to]));
            }
        }
    }
    let q = Arc::new(Quiver::new(pts.iter().map(|p| id[p]).collect(), arrows)?);
    let mut s = Series::zero(&q, trunc);
    // Each triangle is visited once: from the vertex where its first arrow
    // (`a` in both orders) starts.
    for (order, sign) in [(["a", "b", "c"], 1), (["a", "c", "b"], -1)] {
        for &start in &pts {
            let mut at = start;
            let mut ids = Vec::new();
            for kind in order {
                let Some(&ix) = arrow_of.get(&(kind, at)) else {
                    break;
                };
                ids.push(ArrowId(ix as u32));
                at = step(at, DIRS.iter().find(|(k, _)| *k == kind).unwrap().1).unwrap();
            }
            if ids.len() == 3 {
                ids.reverse();
                s.add_term(Path::new(&q, ids)?, F::from_i64(sign));
            }
        }
    }
    Qp::new(&s)
}

fn reject_unused<F>(name: &str, p: &Params<F>, n: bool, coeffs: bool) -> Result<()> {
    if p.n.is_some() && !n {
        return Err(Error::InvalidParams(format!(
            "`{name}` takes no order parameter"
        )));
    }
    if p.coeffs.is_some() && !coeffs {
        return Err(Error::InvalidParams(format!(
            "`{name}` takes no coefficients"
        )));
    }
    Ok(())
}

/// Builds a catalog QP by name at truncation degree `trunc`.
pub fn make_qp<F: Field>(name: &str, params: &Params<F>, trunc: usize) -> Result<Qp<F>> {
    let takes = match name {
        "two_arrows" | "cyclic_triangle" => (false, true),
        "grid" => (true, false),
        _ if names().contains(&name) => (false, false),
        _ => return Err(Error::UnknownCatalog(name.to_string())),
    };
    reject_unused(name, params, takes.0, takes.1)?;
    if params.coeffs.as_ref().is_some_and(|c| c.is_empty()) {
        return Err(Error::InvalidParams("empty coefficient list".into()));
    }
    match name {
        "two_arrows" => two_arrows(&default_coeffs(params), trunc),
        "four_cycle" => four_cycle(trunc),
        "cyclic_triangle" => cyclic_triangle(&default_coeffs(params), trunc),
        "double_triangle" => double_triangle(trunc),
        "grid" => grid(params.n.unwrap_or(1), trunc),
        "a3" => a3(trunc),
        "a3_sink" => a3_sink(trunc),
        "a3_source" => a3_source(trunc),
        "a3_reverse" => a3_reverse(trunc),
        "mu2_a3" => mu2_a3(trunc),
        "affine_a2" => affine_a2(trunc),
        _ => unreachable!(),
    }
}

/// Every catalog QP with default parameters, plus `Q(2)` and the squared
/// cyclic triangle.
pub fn all_qps<F: Field>(trunc: usize) -> Result<Vec<(String, Qp<F>)>> {
    let mut out = Vec::new();
    for e in ENTRIES {
        out.push((
            e.name.to_string(),
            make_qp(e.name, &Params::default(), trunc)?,
        ));
    }
    out.push(("grid(2)".into(), grid(2, trunc)?));
    out.push((
        "cyclic_triangle(0,1)".into(),
        cyclic_triangle(&[F::zero(), F::one()], trunc)?,
    ));
    Ok(out)
}

fn neighbours(q: &Quiver) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> =
        q.vertices().iter().map(|&v| (v, BTreeSet::new())).collect();
    for a in q.arrows() {
        if a.tail != a.head {
            adj.get_mut(&a.tail).unwrap().insert(a.head);
            adj.get_mut(&a.head).unwrap().insert(a.tail);
        }
    }
    adj
}

/// Orders a cycle's vertices starting from its smallest one, following the
/// arrows when the cycle is oriented and otherwise towards the smaller
/// neighbour.
fn orient_cycle(q: &Quiver, cycle: &[Vertex]) -> Vec<Vertex> {
    let d = cycle.len();
    let start = (0..d).min_by_key(|&i| cycle[i]).unwrap();
    let fwd: Vec<Vertex> = (0..d).map(|i| cycle[(start + i) % d]).collect();
    let mut bwd = vec![fwd[0]];
    bwd.extend(fwd[1..].iter().rev());
    let oriented =
        |c: &[Vertex]| (0..d).all(|i| !q.arrows_between(c[i], c[(i + 1) % d]).is_empty());
    match (oriented(&fwd), oriented(&bwd)) {
        (true, _) => fwd,
        (false, true) => bwd,
        _ => {
            if fwd[1] <= bwd[1] {
                fwd
            } else {
                bwd
            }
        }
    }
}

/// Induced cycles of length at least 3 in the underlying simple graph.
pub fn chordless_cycles(q: &Quiver) -> Vec<Vec<Vertex>> {
    let adj = neighbours(q);
    let mut found = BTreeSet::new();
    fn extend(
        adj: &BTreeMap<Vertex, BTreeSet<Vertex>>,
        path: &mut Vec<Vertex>,
        found: &mut BTreeSet<Vec<Vertex>>,
    ) {
        let s = path[0];
        let last = *path.last().unwrap();
        for &w in &adj[&last] {
            if w <= s || path.contains(&w) {
                continue;
            }
            // No chords back to interior vertices.
            let interior = if path.len() > 2 {
                &path[1..path.len() - 1]
            } else {
                &[][..]
            };
            if interior.iter().any(|u| adj[u].contains(&w)) {
                continue;
            }
            path.push(w);
            if path.len() >= 3 && adj[&w].contains(&s) {
                let mut key = path.clone();
                if key[1] > key[key.len() - 1] {
                    key[1..].reverse();
                }
                found.insert(key);
            } else {
                extend(adj, path, found);
            }
            path.pop();
        }
    }
    for &s in q.vertices() {
        let mut path = vec![s];
        extend(&adj, &mut path, &mut found);
    }
    found.into_iter().map(|c| orient_cycle(q, &c)).collect()
}

/// Primitive potential: one oriented chordless cycle per chordless cycle,
/// with coefficient from `coeffs` (keyed by the vertex list returned by
/// [`chordless_cycles`]) or 1 by default.
pub fn primitive_potential<F: Field>(
    q: &Arc<Quiver>,
    coeffs: &BTreeMap<Vec<Vertex>, F>,
    trunc: usize,
) -> Result<Qp<F>> {
    let counts = q.arrow_counts();
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 1 {
                return Err(Error::InvalidQuiver(format!(
                    "multiple arrows {} -> {}",
                    q.vertices()[i],
                    q.vertices()[j]
                )));
            }
        }
    }
    if let Some((i, j)) = q.two_cycles().first() {
        return Err(Error::InvalidQuiver(format!("2-cycle between {i} and {j}")));
    }
    let cycles = chordless_cycles(q);
    for key in coeffs.keys() {
        if !cycles.contains(key) {
            return Err(Error::InvalidParams(format!(
                "{key:?} is not a chordless cycle"
            )));
        }
    }
    let mut s = Series::zero(q, trunc);
    for cyc in &cycles {
        let d = cyc.len();
        let mut ids = Vec::with_capacity(d);
        for i in 0..d {
            match q.arrows_between(cyc[i], cyc[(i + 1) % d]).first() {
                Some(&a) => ids.push(a),
                None => {
                    return Err(Error::InvalidQuiver(format!(
                        "chordless cycle {cyc:?} is not cyclically oriented"
                    )))
                }
            }
        }
        ids.reverse();
        let c = coeffs.get(cyc).cloned().unwrap_or_else(F::one);
        if c.is_zero() {
            return Err(Error::InvalidParams(format!("zero coefficient on {cyc:?}")));
        }
        s.add_term(Path::new(q, ids)?, c);
    }
    Qp::new(&s)
}

/// Same arrow sequences over a quiver with the same arrow list but renamed
/// vertices.
fn transport<F: Field>(x: &Series<F>, q: &Arc<Quiver>) -> Result<Series<F>> {
    let mut out = Series::zero(q, x.trunc());
    for (p, c) in x.iter() {
        out.add_term(Path::new(q, p.arrows().to_vec())?, c.clone());
    }
    Ok(out)
}

fn identity_block<F: Field>(rows: usize, cols: usize, r0: usize, c0: usize, n: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..n {
        m.set(r0 + i, c0 + i, F::one());
    }
    m
}

/// The band module `M(m, n)` on the double cyclic triangle: spaces
/// `K^m, K^(m+n), K^n`, `a1 = [I; 0]`, `a2 = [0; I]`, `b1 = [0 I]`,
/// `b2 = [I 0]` and `c1 = c2 = 0`.
pub fn band_rep<F: Field>(qp: &Qp<F>, m: usize, n: usize) -> Result<DecoratedRep<F>> {
    if m == 0 && n == 0 {
        return Err(Error::InvalidParams(
            "band module M(0,0) is not defined".into(),
        ));
    }
    let k = m + n;
    DecoratedRep::from_named(
        qp,
        &[m, k, n],
        &[0, 0, 0],
        &[
            ("a1", identity_block(k, m, 0, 0, m)),
            ("a2", identity_block(k, m, n, 0, m)),
            ("b1", identity_block(n, k, 0, m, n)),
            ("b2", identity_block(n, k, 0, 0, n)),
        ],
    )
}

/// The six indecomposable positive representations of the path `1 -> 2 -> 3`
/// with identity maps, by dimension vector (1,0,0), (0,1,0), (0,0,1),
/// (1,1,0), (0,1,1), (1,1,1).
pub fn a3_indecomposables<F: Field>(qp: &Qp<F>) -> Result<Vec<DecoratedRep<F>>> {
    let one = || Matrix::from_rows(vec![vec![F::one()]]).expect("1x1");
    let dims: [[usize; 3]; 6] = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [0, 1, 1],
        [1, 1, 1],
    ];
    dims.iter()
        .map(|d| {
            let mut named = Vec::new();
            if d[0] == 1 && d[1] == 1 {
                named.push(("a", one()));
            }
            if d[1] == 1 && d[2] == 1 {
                named.push(("b", one()));
            }
            DecoratedRep::from_named(qp, d, &[0, 0, 0], &named)
        })
        .collect()
}

/// The two identifications of `μ_2` of the double triangle with the double
/// triangle itself, after renumbering vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandRelabeling {
    /// Swap 1 and 2; used when `m >= n`.
    SwapOneTwo,
    /// Swap 2 and 3; used when `m <= n`.
    SwapTwoThree,
}

impl BandRelabeling {
    pub fn vertex_map(self, v: Vertex) -> Vertex {
        match (self, v) {
            (BandRelabeling::SwapOneTwo, 1) => 2,
            (BandRelabeling::SwapOneTwo, 2) => 1,
            (BandRelabeling::SwapTwoThree, 2) => 3,
            (BandRelabeling::SwapTwoThree, 3) => 2,
            _ => v,
        }
    }

    /// Arrow images `(arrow, sign, image)` into `μ_2` of the double triangle.
    pub fn images(self) -> [(&'static str, i64, &'static str); 6] {
        match self {
            BandRelabeling::SwapOneTwo => [
                ("a1", -1, "a2⋆"),
                ("a2", 1, "a1⋆"),
                ("b1", 1, "[b1.a2]"),
                ("b2", 1, "[b2.a1]"),
                ("c1", -1, "b1⋆"),
                ("c2", 1, "b2⋆"),
            ],
            BandRelabeling::SwapTwoThree => [
                ("a1", 1, "[b2.a1]"),
                ("a2", 1, "[b1.a2]"),
                ("b1", 1, "b2⋆"),
                ("b2", -1, "b1⋆"),
                ("c1", 1, "a1⋆"),
                ("c2", -1, "a2⋆"),
            ],
        }
    }

    /// The double triangle with vertices renumbered.
    pub fn relabeled<F: Field>(self, dt: &Qp<F>) -> Result<Qp<F>> {
        let q = Arc::new(dt.quiver().relabel_vertices(|v| self.vertex_map(v))?);
        let s = transport(dt.potential().series(), &q)?;
        Qp::new(&s)
    }

    /// Substitution from the relabeled double triangle into `mu`, the
    /// mutation of the double triangle at 2.
    pub fn substitution<F: Field>(
        self,
        relabeled: &Qp<F>,
        mu: &Qp<F>,
    ) -> Result<ArrowSubstitution<F>> {
        let trunc = mu.trunc();
        let named = self
            .images()
            .iter()
            .map(|&(a, sign, img)| {
                Ok((
                    a,
                    Series::arrow_named(mu.quiver(), trunc, img)?.scale(&F::from_i64(sign)),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        ArrowSubstitution::from_named(relabeled.quiver(), mu.quiver(), trunc, &named)
    }
}

/// One Euclid step on a double-triangle module: `μ_2`, then the
/// identification matching `dim M_1` against `dim M_3`, expressed again over
/// `dt`.
pub fn band_step<F: Field>(
    dt: &Qp<F>,
    rep: &DecoratedRep<F>,
) -> Result<(DecoratedRep<F>, BandRelabeling)> {
    let (m, n) = (rep.m_dim(1)?, rep.m_dim(3)?);
    let which = if m >= n {
        BandRelabeling::SwapOneTwo
    } else {
        BandRelabeling::SwapTwoThree
    };
    let mutated = mutate_rep(&rep.with_qp(dt)?, 2)?;
    let mu = mutated.qp().clone();
    let relabeled = which.relabeled(&dt.with_trunc(mu.trunc()))?;
    let phi = which.substitution(&relabeled, &mu)?;
    let back = mutated.pullback(&relabeled, &phi)?;
    // Both vertex maps are involutions.
    let out = back.relabel_vertices(&dt.with_trunc(mu.trunc()), |v| which.vertex_map(v))?;
    Ok((out.with_qp(dt)?, which))
}

/// Rotation `v -> v - 1 (mod 3)` of the double triangle, renaming `b` to
/// `a`, `c` to `b` and `a` to `c`. It carries `M(0, g)` to `M(g, 0)`.
pub fn rotate_double_triangle<F: Field>(
    dt: &Qp<F>,
    rep: &DecoratedRep<F>,
) -> Result<DecoratedRep<F>> {
    let rot = |v: Vertex| if v == 1 { 3 } else { v - 1 };
    let q = Arc::new(dt.quiver().relabel_vertices(rot)?);
    let rotated = Qp::new(&transport(dt.potential().series(), &q)?)?;
    let moved = rep.relabel_vertices(&rotated, rot)?;
    let trunc = dt.trunc();
    let named = [("a", "b"), ("b", "c"), ("c", "a")]
        .iter()
        .flat_map(|(from, to)| (1..=2).map(move |i| (format!("{from}{i}"), format!("{to}{i}"))))
        .map(|(from, to)| Ok((from, Series::arrow_named(&q, trunc, &to)?)))
        .collect::<Result<Vec<_>>>()?;
    let named: Vec<(&str, Series<F>)> =
        named.iter().map(|(a, s)| (a.as_str(), s.clone())).collect();
    let phi = ArrowSubstitution::from_named(dt.quiver(), &q, trunc, &named)?;
    moved.pullback(dt, &phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::jacobian::{is_rigid, jacobian_dim};
    use crate::potential::Potential;
    use crate::reps::is_isomorphic;

    type R = Rational;

    fn pot(qp: &Qp<R>, src: &str) -> Potential<R> {
        Potential::new(&qp.series(src).unwrap()).unwrap()
    }

    fn arrow_names(q: &Quiver) -> Vec<&str> {
        q.arrows().iter().map(|a| a.name.as_str()).collect()
    }

    #[test]
    fn named_constructors() {
        let four = make_qp::<R>("four_cycle", &Params::default(), 6).unwrap();
        assert_eq!(four.potential(), &pot(&four, "d.c.b.a"));
        let two = make_qp::<R>(
            "two_arrows",
            &Params::with_coeffs(vec![R::zero(), R::one()]),
            8,
        )
        .unwrap();
        assert_eq!(two.potential(), &pot(&two, "a.b.a.b"));
        let tri = make_qp::<R>(
            "cyclic_triangle",
            &Params::with_coeffs(vec![R::from_i64(2), R::from_i64(-1)]),
            9,
        )
        .unwrap();
        assert_eq!(tri.potential(), &pot(&tri, "2 * c.b.a - c.b.a.c.b.a"));
    }

    #[test]
    fn bad_names_and_params() {
        assert_eq!(
            make_qp::<R>("pentagon", &Params::default(), 4),
            Err(Error::UnknownCatalog("pentagon".into()))
        );
        assert!(make_qp::<R>("four_cycle", &Params::with_n(2), 4).is_err());
        assert!(make_qp::<R>("grid", &Params::with_n(0), 4).is_err());
        assert!(make_qp::<R>("cyclic_triangle", &Params::with_coeffs(vec![]), 4).is_err());
    }

    #[test]
    fn grid_one_is_the_cyclic_triangle() {
        let g = grid::<R>(1, 6).unwrap();
        assert_eq!(arrow_names(g.quiver()), ["a1", "b2", "c3"]);
        assert_eq!(g.potential(), &pot(&g, "c3.b2.a1"));
    }

    #[test]
    fn grid_two_shape() {
        let g = grid::<R>(2, 6).unwrap();
        assert_eq!(g.quiver().vertices().len(), 6);
        assert_eq!(g.quiver().num_arrows(), 9);
        // Three upward triangles with sign +1 and one downward with -1.
        let signs: Vec<String> = g
            .potential()
            .series()
            .iter()
            .map(|(_, c)| c.to_string())
            .collect();
        assert_eq!(signs.iter().filter(|s| *s == "1").count(), 3);
        assert_eq!(signs.iter().filter(|s| *s == "-1").count(), 1);
        assert!(g.quiver().is_two_acyclic());
    }

    #[test]
    fn grid_points_cover_simplex() {
        for n in 1..5 {
            let pts = grid_points(n);
            assert_eq!(pts.len(), (n + 1) * (n + 2) / 2);
            assert!(pts.iter().all(|&(p, q, r)| p + q + r == n));
        }
    }

    #[test]
    fn chordless_examples() {
        let tri = cyclic_triangle::<R>(&[R::one()], 4).unwrap();
        assert_eq!(chordless_cycles(tri.quiver()), vec![vec![1, 2, 3]]);
        assert!(chordless_cycles(a3::<R>(4).unwrap().quiver()).is_empty());
        let four = four_cycle::<R>(4).unwrap();
        assert_eq!(chordless_cycles(four.quiver()), vec![vec![1, 2, 3, 4]]);
        // A 4-cycle with a chord only has the two triangles.
        let chord = Quiver::from_triples(
            &[1, 2, 3, 4],
            &[
                ("a", 1, 2),
                ("b", 2, 3),
                ("c", 3, 4),
                ("d", 4, 1),
                ("e", 3, 1),
            ],
        )
        .unwrap();
        assert_eq!(chordless_cycles(&chord), vec![vec![1, 2, 3], vec![1, 3, 4]]);
    }

    #[test]
    fn primitive_potentials() {
        let tri = cyclic_triangle::<R>(&[R::one()], 6).unwrap();
        let p = primitive_potential::<R>(tri.quiver(), &BTreeMap::new(), 6).unwrap();
        assert_eq!(p, tri);
        let mu = mu2_a3::<R>(6).unwrap();
        let p = primitive_potential::<R>(mu.quiver(), &BTreeMap::new(), 6).unwrap();
        assert_eq!(p.potential(), &pot(&p, "b⋆.[b.a].a⋆"));
        let a = a3_sink::<R>(6).unwrap();
        assert!(primitive_potential::<R>(a.quiver(), &BTreeMap::new(), 6)
            .unwrap()
            .potential()
            .is_zero());
        let dt = double_triangle::<R>(6).unwrap();
        assert!(primitive_potential::<R>(dt.quiver(), &BTreeMap::new(), 6).is_err());
        let unoriented = Arc::new(
            Quiver::from_triples(&[1, 2, 3], &[("a", 1, 2), ("b", 2, 3), ("c", 1, 3)]).unwrap(),
        );
        assert!(primitive_potential::<R>(&unoriented, &BTreeMap::new(), 6).is_err());
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![1, 2, 3], R::from_i64(5));
        let p = primitive_potential(tri.quiver(), &coeffs, 6).unwrap();
        assert_eq!(p.potential(), &pot(&p, "5 * c.b.a"));
    }

    #[test]
    fn grid_one_rigid_and_finite() {
        let g = grid::<R>(1, 9).unwrap();
        assert!(is_rigid(&g).rigid);
        assert_eq!(jacobian_dim(&g).total(), Some(6));
    }

    #[test]
    fn band_reps_validate() {
        let dt = double_triangle::<R>(8).unwrap();
        for (m, n) in [(1, 0), (0, 1), (1, 1), (2, 1), (3, 2)] {
            let r = band_rep(&dt, m, n).unwrap();
            assert!(r.is_valid(), "M({m},{n})");
            assert_eq!(r.m_dims(), [m, m + n, n]);
        }
        assert!(band_rep(&dt, 0, 0).is_err());
        let r = band_rep(&dt, 1, 0).unwrap();
        assert_eq!(r.action_named("a1").unwrap(), &Matrix::from_i64(1, 1, &[1]));
        assert_eq!(r.action_named("a2").unwrap(), &Matrix::from_i64(1, 1, &[1]));
    }

    #[test]
    fn band_perturbation_breaks_validity() {
        let dt = double_triangle::<R>(8).unwrap();
        let r = band_rep(&dt, 1, 1).unwrap();
        let c1 = dt.quiver().arrow_id("c1").unwrap();
        let bad = r.with_action(c1, Matrix::from_i64(1, 1, &[1])).unwrap();
        assert!(!bad.is_valid());
    }

    #[test]
    fn relabelings_carry_potentials() {
        let dt = double_triangle::<R>(6).unwrap();
        let mu = mutate(&dt, 2).unwrap().mutated;
        for which in [BandRelabeling::SwapOneTwo, BandRelabeling::SwapTwoThree] {
            let rel = which.relabeled(&dt).unwrap();
            let phi = which.substitution(&rel, &mu).unwrap();
            let image = phi.apply_potential(rel.potential()).unwrap();
            assert_eq!(&image, mu.potential(), "{which:?}");
        }
    }

    #[test]
    fn first_band_steps() {
        let dt = double_triangle::<R>(6).unwrap();
        let (r, which) = band_step(&dt, &band_rep(&dt, 2, 1).unwrap()).unwrap();
        assert_eq!(which, BandRelabeling::SwapOneTwo);
        assert!(is_isomorphic(&r, &band_rep(&dt, 1, 1).unwrap())
            .unwrap()
            .is_isomorphic());
        let (r, which) = band_step(&dt, &band_rep(&dt, 1, 2).unwrap()).unwrap();
        assert_eq!(which, BandRelabeling::SwapTwoThree);
        assert!(is_isomorphic(&r, &band_rep(&dt, 1, 1).unwrap())
            .unwrap()
            .is_isomorphic());
    }

    #[test]
    fn rotation_turns_zero_m_into_zero_n() {
        let dt = double_triangle::<R>(6).unwrap();
        let r = rotate_double_triangle(&dt, &band_rep(&dt, 0, 2).unwrap()).unwrap();
        assert_eq!(r, band_rep(&dt, 2, 0).unwrap());
    }

    #[test]
    fn a3_family() {
        let qp = a3::<R>(4).unwrap();
        let reps = a3_indecomposables(&qp).unwrap();
        assert_eq!(reps.len(), 6);
        for (i, x) in reps.iter().enumerate() {
            assert!(x.is_valid());
            for y in &reps[i + 1..] {
                assert!(is_isomorphic(x, y).unwrap().is_proved_non_isomorphic());
            }
        }
    }

    #[test]
    fn catalog_qps_are_loop_free_and_listed() {
        let all = all_qps::<R>(5).unwrap();
        assert_eq!(all.len(), ENTRIES.len() + 2);
        for (name, qp) in &all {
            assert!(qp.quiver().loops().is_empty(), "{name}");
        }
    }
}
