//! Mutation of decorated representations.
//!
//! At a vertex `k` with incoming arrows `a_1 .. a_s` and outgoing arrows
//! `b_1 .. b_t` a representation gives the triangle
//!
//! ```text
//!            M_k
//!       α ↗       ↘ β
//!   M_in  ←──γ──  M_out
//! ```
//!
//! with `M_in = ⊕ M_{t(a_p)}`, `M_out = ⊕ M_{h(b_q)}`, `α = (a_1 .. a_s)`,
//! `β = (b_1; ..; b_t)` and `γ_{p,q} = ∂_{[b_q.a_p]} [S]` evaluated on `M`.
//! The new space at `k` is
//! `ker γ / im β ⊕ im γ ⊕ ker α / im γ ⊕ V_k`, in that order.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{complete_basis, extend_within, Matrix};
use crate::mutation::{
    premutate, split, ArrowOrigin, MutationResult, Premutation, ReductionResult,
};
use crate::potential::cyclic_derivative;
use crate::quiver::{ArrowId, Vertex};
use crate::reps::DecoratedRep;
use crate::substitution::ArrowSubstitution;

/// Basis of the column space in reduced column-echelon form.
pub fn column_echelon<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let r = m.transpose().rref();
    let rank = r.pivots.len();
    r.matrix.block(0, 0, rank, m.rows()).transpose()
}

/// Columns of `basis` expressed in coordinates of the independent columns
/// of `frame` (which must span them).
fn coords<F: Field>(frame: &Matrix<F>, x: &Matrix<F>) -> Result<Matrix<F>> {
    if frame.cols() == 0 {
        return Ok(Matrix::zeros(0, x.cols()));
    }
    frame
        .solve(x)
        .ok_or_else(|| Error::Representation("vector outside the expected span".into()))
}

#[derive(Clone, Debug)]
pub struct Triangle<F> {
    pub vertex: Vertex,
    /// `a_1 .. a_s`.
    pub incoming: Vec<ArrowId>,
    /// `b_1 .. b_t`.
    pub outgoing: Vec<ArrowId>,
    /// `dim M_{t(a_p)}`.
    pub in_dims: Vec<usize>,
    /// `dim M_{h(b_q)}`.
    pub out_dims: Vec<usize>,
    pub alpha: Matrix<F>,
    pub beta: Matrix<F>,
    pub gamma: Matrix<F>,
}

impl<F: Field> Triangle<F> {
    pub fn dim_in(&self) -> usize {
        self.in_dims.iter().sum()
    }

    pub fn dim_out(&self) -> usize {
        self.out_dims.iter().sum()
    }

    pub fn in_offset(&self, p: usize) -> usize {
        self.in_dims[..p].iter().sum()
    }

    pub fn out_offset(&self, q: usize) -> usize {
        self.out_dims[..q].iter().sum()
    }

    /// `αγ = 0` and `γβ = 0`.
    pub fn compositions_vanish(&self) -> bool {
        self.alpha
            .mul(&self.gamma)
            .map(|m| m.is_zero())
            .unwrap_or(false)
            && self
                .gamma
                .mul(&self.beta)
                .map(|m| m.is_zero())
                .unwrap_or(false)
    }
}

/// `M` viewed over the premutated quiver without its dual arrows: composites
/// act by `b a`, duals by zero. Used to evaluate `[S]`.
fn collapsed_rep<F: Field>(rep: &DecoratedRep<F>, pre: &Premutation<F>) -> Result<DecoratedRep<F>> {
    let q = pre.qp.quiver();
    let action = q
        .arrow_ids()
        .map(|x| {
            let shape = (rep.m_dim(q.head(x))?, rep.m_dim(q.tail(x))?);
            match &pre.origin[x.index()] {
                ArrowOrigin::Kept(a) => Ok(rep.action(*a).clone()),
                ArrowOrigin::Composite { b, a } => rep.action(*b).mul(rep.action(*a)),
                ArrowOrigin::Dual(_) => Ok(Matrix::zeros(shape.0, shape.1)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    DecoratedRep::new(
        &pre.qp,
        rep.m_dims().to_vec(),
        rep.v_dims().to_vec(),
        action,
    )
}

/// The triangle of `rep` at the premutation's vertex.
pub fn triangle<F: Field>(rep: &DecoratedRep<F>, pre: &Premutation<F>) -> Result<Triangle<F>> {
    if *rep.qp() != pre.source {
        return Err(Error::QuiverMismatch);
    }
    let q = rep.quiver();
    let k = pre.vertex;
    let mk = rep.m_dim(k)?;
    let in_dims = pre
        .incoming
        .iter()
        .map(|&a| rep.m_dim(q.tail(a)))
        .collect::<Result<Vec<_>>>()?;
    let out_dims = pre
        .outgoing
        .iter()
        .map(|&b| rep.m_dim(q.head(b)))
        .collect::<Result<Vec<_>>>()?;
    let alpha_parts: Vec<&Matrix<F>> = pre.incoming.iter().map(|&a| rep.action(a)).collect();
    let beta_parts: Vec<&Matrix<F>> = pre.outgoing.iter().map(|&b| rep.action(b)).collect();
    let dim_in: usize = in_dims.iter().sum();
    let alpha = Matrix::hstack(&alpha_parts, mk);
    let beta = Matrix::vstack(&beta_parts, mk);

    let collapsed = collapsed_rep(rep, pre)?;
    let mut gamma = Matrix::zeros(dim_in, out_dims.iter().sum());
    let mut row = 0;
    for (p, &a) in pre.incoming.iter().enumerate() {
        let mut col = 0;
        for (qi, &b) in pre.outgoing.iter().enumerate() {
            let d = cyclic_derivative(pre.composite_of(b, a), &pre.collapsed);
            let block = collapsed.evaluate_block(&d, q.tail(a), q.head(b))?;
            gamma.set_block(row, col, &block);
            col += out_dims[qi];
        }
        row += in_dims[p];
    }
    Ok(Triangle {
        vertex: k,
        incoming: pre.incoming.clone(),
        outgoing: pre.outgoing.clone(),
        in_dims,
        out_dims,
        alpha,
        beta,
        gamma,
    })
}

/// Splitting data `(ρ, σ)` together with the bases fixing the coordinates
/// of the four summands of the new space at `k`.
#[derive(Clone, Debug)]
pub struct SplittingData<F> {
    /// Basis `B` of `im β` (columns in `M_out`).
    pub im_beta: Matrix<F>,
    /// Basis `[B | C1]` of `ker γ`.
    pub ker_gamma: Matrix<F>,
    /// `ρ: M_out -> ker γ` in `[B | C1]`-coordinates.
    pub rho: Matrix<F>,
    /// Basis `G` of `im γ` (columns in `M_in`).
    pub im_gamma: Matrix<F>,
    /// Basis `[G | C3]` of `ker α`.
    pub ker_alpha: Matrix<F>,
    /// `σ: ker α / im γ -> ker α`, columns in `M_in`.
    pub sigma: Matrix<F>,
}

impl<F: Field> SplittingData<F> {
    /// `dim ker γ / im β`.
    pub fn n_coker(&self) -> usize {
        self.ker_gamma.cols() - self.im_beta.cols()
    }

    pub fn n_image(&self) -> usize {
        self.im_gamma.cols()
    }

    /// `dim ker α / im γ`.
    pub fn n_ker(&self) -> usize {
        self.ker_alpha.cols() - self.im_gamma.cols()
    }

    /// `π ρ: M_out -> ker γ / im β`.
    pub fn pi_rho(&self) -> Matrix<F> {
        let nb = self.im_beta.cols();
        self.rho.block(nb, 0, self.n_coker(), self.rho.cols())
    }

    /// `ρ ι = id` on `ker γ` and `σ` is a section of `ker α -> ker α / im γ`.
    pub fn check(&self, t: &Triangle<F>) -> bool {
        let nk = self.ker_gamma.cols();
        let rho_ok = self
            .rho
            .mul(&self.ker_gamma)
            .map(|m| m == Matrix::identity(nk))
            .unwrap_or(false)
            && t.gamma
                .mul(&self.ker_gamma)
                .map(|m| m.is_zero())
                .unwrap_or(false);
        let sigma_ok = t
            .alpha
            .mul(&self.sigma)
            .map(|m| m.is_zero())
            .unwrap_or(false)
            && coords(&self.ker_alpha, &self.sigma)
                .map(|c| {
                    let g = self.im_gamma.cols();
                    c.block(g, 0, self.n_ker(), c.cols()) == Matrix::identity(self.n_ker())
                })
                .unwrap_or(false);
        rho_ok && sigma_ok
    }
}

/// Echelon bases, `ρ` the projection along standard complement vectors and
/// `σ` the echelon coset representatives.
pub fn default_splitting<F: Field>(t: &Triangle<F>) -> Result<SplittingData<F>> {
    let (din, dout) = (t.dim_in(), t.dim_out());
    let im_beta = column_echelon(&t.beta);
    let ker_g = column_echelon(&t.gamma.kernel());
    let c1 = extend_within(&im_beta, &ker_g);
    let ker_gamma = Matrix::hstack(&[&im_beta, &c1], dout);
    let complement = complete_basis(&ker_gamma, dout);
    let full = Matrix::hstack(&[&ker_gamma, &complement], dout);
    let inv = full
        .inverse()
        .ok_or_else(|| Error::Representation("ker γ basis is not independent".into()))?;
    let rho = inv.block(0, 0, ker_gamma.cols(), dout);

    let im_gamma = column_echelon(&t.gamma);
    let ker_a = column_echelon(&t.alpha.kernel());
    let c3 = extend_within(&im_gamma, &ker_a);
    let ker_alpha = Matrix::hstack(&[&im_gamma, &c3], din);
    let sd = SplittingData {
        im_beta,
        ker_gamma,
        rho,
        im_gamma,
        ker_alpha,
        sigma: c3,
    };
    if !sd.check(t) {
        return Err(Error::Representation("splitting identities fail".into()));
    }
    Ok(sd)
}

/// `ρ' = ρ + ξγ` and `σ' = σ + Gη` with `ξ`, `η` all-ones matrices.
pub fn perturbed_splitting<F: Field>(t: &Triangle<F>) -> Result<SplittingData<F>> {
    let mut sd = default_splitting(t)?;
    let ones = |r: usize, c: usize| Matrix::from_i64(r, c, &vec![1; r * c]);
    let xi = ones(sd.ker_gamma.cols(), t.dim_in());
    sd.rho = sd.rho.add(&xi.mul(&t.gamma)?)?;
    let eta = ones(sd.n_image(), sd.n_ker());
    sd.sigma = sd.sigma.add(&sd.im_gamma.mul(&eta)?)?;
    if !sd.check(t) {
        return Err(Error::Representation(
            "perturbed splitting identities fail".into(),
        ));
    }
    Ok(sd)
}

/// `dim ker β - dim (ker β ∩ im α)`.
fn new_decoration_dim<F: Field>(t: &Triangle<F>) -> usize {
    let ker_b = t.beta.kernel();
    let im_a = t.alpha.image();
    let mk = t.alpha.rows();
    let sum = Matrix::hstack(&[&ker_b, &im_a], mk).rank();
    let meet = ker_b.cols() + im_a.cols() - sum;
    ker_b.cols() - meet
}

/// `μ̃_k(M)` over the premutated QP.
pub fn premutate_rep<F: Field>(
    rep: &DecoratedRep<F>,
    pre: &Premutation<F>,
    t: &Triangle<F>,
    sd: &SplittingData<F>,
) -> Result<DecoratedRep<F>> {
    let q = rep.quiver();
    let k = pre.vertex;
    let (din, dout) = (t.dim_in(), t.dim_out());
    let (n1, n2, n3) = (sd.n_coker(), sd.n_image(), sd.n_ker());
    let n4 = rep.v_dim(k)?;
    let mk_new = n1 + n2 + n3 + n4;

    let gamma_coords = coords(&sd.im_gamma, &t.gamma)?;
    let alpha_bar = Matrix::vstack(
        &[
            &sd.pi_rho().neg(),
            &gamma_coords.neg(),
            &Matrix::zeros(n3 + n4, dout),
        ],
        dout,
    );
    let beta_bar = Matrix::hstack(
        &[
            &Matrix::zeros(din, n1),
            &sd.im_gamma,
            &sd.sigma,
            &Matrix::zeros(din, n4),
        ],
        din,
    );

    let ki = q.vertex_index(k)?;
    let mut m_dims = rep.m_dims().to_vec();
    let mut v_dims = rep.v_dims().to_vec();
    m_dims[ki] = mk_new;
    v_dims[ki] = new_decoration_dim(t);

    let nq = pre.qp.quiver();
    let action = nq
        .arrow_ids()
        .map(|x| match &pre.origin[x.index()] {
            ArrowOrigin::Kept(a) => Ok(rep.action(*a).clone()),
            ArrowOrigin::Composite { b, a } => rep.action(*b).mul(rep.action(*a)),
            ArrowOrigin::Dual(a) => {
                if let Some(p) = t.incoming.iter().position(|x| x == a) {
                    Ok(beta_bar.block(t.in_offset(p), 0, t.in_dims[p], mk_new))
                } else {
                    let qi = t.outgoing.iter().position(|x| x == a).expect("arrow at k");
                    Ok(alpha_bar.block(0, t.out_offset(qi), mk_new, t.out_dims[qi]))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    DecoratedRep::new(&pre.qp, m_dims, v_dims, action)
}

/// Reduced part: each reduced arrow acts by its image under the tracked
/// equivalence, evaluated on `rep`.
pub fn reduce_rep<F: Field>(
    rep: &DecoratedRep<F>,
    reduction: &ReductionResult<F>,
) -> Result<DecoratedRep<F>> {
    let theta = &reduction.equivalence;
    let red = &reduction.reduced;
    let images = reduction
        .reduced_arrows
        .iter()
        .map(|&a| theta.image(a).clone())
        .collect();
    let phi = ArrowSubstitution::new(red.quiver(), theta.to_quiver(), theta.trunc(), images)?;
    rep.pullback(red, &phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplittingChoice {
    #[default]
    Default,
    Perturbed,
}

/// Everything produced while mutating a representation.
#[derive(Clone, Debug)]
pub struct RepMutation<F> {
    pub rep: DecoratedRep<F>,
    pub premutated_rep: DecoratedRep<F>,
    pub triangle: Triangle<F>,
    pub splitting: SplittingData<F>,
    pub mutation: MutationResult<F>,
}

type Stages<F> = (
    Premutation<F>,
    Triangle<F>,
    SplittingData<F>,
    DecoratedRep<F>,
);

/// `μ_k(M)` with the chosen splitting data. If the premutated module needs
/// a higher truncation degree than the QP carries, the QP side is recomputed
/// at that degree.
pub fn mutate_rep_with<F: Field>(
    rep: &DecoratedRep<F>,
    k: Vertex,
    choice: SplittingChoice,
) -> Result<RepMutation<F>> {
    if let Err(v) = rep.validate() {
        return Err(Error::Representation(v.to_string()));
    }
    let run = |rep: &DecoratedRep<F>| -> Result<Stages<F>> {
        let pre = premutate(rep.qp(), k)?;
        let t = triangle(rep, &pre)?;
        let sd = match choice {
            SplittingChoice::Default => default_splitting(&t)?,
            SplittingChoice::Perturbed => perturbed_splitting(&t)?,
        };
        let pr = premutate_rep(rep, &pre, &t, &sd)?;
        Ok((pre, t, sd, pr))
    };
    let (mut pre, mut t, mut sd, mut pr) = run(rep)?;
    let need = pr
        .nilpotency_degree()
        .ok_or_else(|| Error::Representation("premutated action is not nilpotent".into()))?;
    let mut rep = rep.clone();
    if need > rep.qp().trunc() {
        rep = rep.with_qp(&rep.qp().with_trunc(need))?;
        (pre, t, sd, pr) = run(&rep)?;
    }
    let reduction = split(&pre.qp)?;
    let out = reduce_rep(&pr, &reduction)?;
    let mutated = reduction.reduced.clone();
    let degenerate = !mutated.quiver().is_two_acyclic();
    Ok(RepMutation {
        rep: out,
        premutated_rep: pr,
        triangle: t,
        splitting: sd,
        mutation: MutationResult {
            vertex: k,
            premutation: pre,
            reduction,
            mutated,
            degenerate,
        },
    })
}

/// `μ_k(M)` with the default splitting data.
pub fn mutate_rep<F: Field>(rep: &DecoratedRep<F>, k: Vertex) -> Result<DecoratedRep<F>> {
    Ok(mutate_rep_with(rep, k, SplittingChoice::Default)?.rep)
}
