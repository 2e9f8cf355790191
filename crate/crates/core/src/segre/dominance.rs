//! Jacobian rank at a witness sample, and restriction to `dim X` variables.

use alloc::vec::Vec;

use rand::Rng as _;

use crate::algebra::linalg;
use crate::algebra::{Field, MultiPoly, Ring, Scalar, Variables};
use crate::cubic::projective_points;
use crate::rng::{seeded, SeededRng, SAMPLE_BUDGET};

use super::verify::{reduce_mod, reduce_poly};
use super::{LineCertificate, PsiMap, SegreError, MODULAR_PRIMES};

/// Finite fields are scanned exhaustively when `q^{inputs}` stays below this.
pub const EXHAUSTIVE_SAMPLE_LIMIT: u64 = 1_000_000;

/// Rank of the Jacobian at one exact sample. Full rank at a witness proves
/// the map is dominant; it is recorded as a witness, not a theorem about
/// generic rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub target: usize,
    pub sample: Vec<Scalar>,
    pub seed: u64,
    pub attempts: usize,
    /// Prime modulo which the rank was certified, when not computed over the
    /// field itself.
    pub modulus: Option<u64>,
}

impl RankCertificate {
    pub fn is_full(&self) -> bool {
        self.rank == self.target
    }
}

fn sample_values(field: &Field, rng: &mut SeededRng, len: usize) -> Vec<Scalar> {
    match field {
        Field::Rationals => (0..len)
            .map(|_| field.from_i64(rng.gen_range(-50..=50)))
            .collect(),
        _ => (0..len).map(|_| field.random_element(rng, 0)).collect(),
    }
}

/// Affine samples of `k^len`: [`SAMPLE_BUDGET`] seeded random ones, then
/// over small finite fields every point in order.
fn samples<'a>(
    field: &'a Field,
    len: usize,
    rng: &'a mut SeededRng,
) -> alloc::boxed::Box<dyn Iterator<Item = Vec<Scalar>> + 'a> {
    let small = field
        .order()
        .and_then(|q| q.checked_pow(len as u32))
        .is_some_and(|c| c <= EXHAUSTIVE_SAMPLE_LIMIT);
    let random = (0..SAMPLE_BUDGET).map(move |_| sample_values(field, rng, len));
    if small {
        // then every affine point: those with first projective coordinate 1
        let all = projective_points(field, len + 1)
            .take_while(|v| field.is_one(&v[0]))
            .map(|v| v[1..].to_vec());
        alloc::boxed::Box::new(random.chain(all))
    } else {
        alloc::boxed::Box::new(random)
    }
}

/// `D·∂N_i/∂x_j − N_i·∂D/∂x_j` at the sample; `None` if `D` vanishes there.
fn jacobian_at(field: &Field, hom: &[MultiPoly], s: &[Scalar]) -> Option<Vec<Vec<Scalar>>> {
    let (d, dgrad) = hom[0].eval_with_gradient(s);
    if field.is_zero(&d) {
        return None;
    }
    let rows = hom[1..]
        .iter()
        .map(|num| {
            let (nv, g) = num.eval_with_gradient(s);
            g.iter()
                .zip(&dgrad)
                .map(|(gi, di)| field.sub(&field.mul(&d, gi), &field.mul(&nv, di)))
                .collect()
        })
        .collect();
    Some(rows)
}

/// `Ψ_hom` reduced modulo the first usable prime of [`MODULAR_PRIMES`].
fn reduced_map(hom: &[MultiPoly]) -> Option<(u64, Vec<MultiPoly>)> {
    MODULAR_PRIMES.iter().find_map(|&p| {
        let r: Option<Vec<MultiPoly>> = hom.iter().map(|f| reduce_poly(p, f)).collect();
        r.map(|r| (p, r))
    })
}

/// Rank of the Jacobian of the affine components at a seeded sample
/// avoiding the denominator. Over `Q` the best rank among
/// [`SAMPLE_BUDGET`] samples is returned (stopping at full rank); over a
/// finite field anything short of full rank is reported as
/// [`SegreError::ExhaustedSamples`], since tiny fields can lack room.
///
/// Over `Q` each sample is first tried modulo a large prime: full rank of
/// the reduced Jacobian implies full rank over `Q`. Only when that fails is
/// the Jacobian evaluated exactly.
pub fn dominance_rank(psi: &PsiMap, seed: u64) -> Result<RankCertificate, SegreError> {
    let field = psi.field().clone();
    let target = psi.dimension();
    let len = psi.num_inputs();
    let hom = psi.homogeneous();
    let modular = if field == Field::Rationals {
        reduced_map(&hom)
    } else {
        None
    };
    let mut rng = seeded(seed);
    let mut best: Option<RankCertificate> = None;
    let mut attempts = 0;
    for s in samples(&field, len, &mut rng) {
        attempts += 1;
        if let Some((p, reduced)) = &modular {
            let fp = Field::Prime(*p);
            let sp: Option<Vec<Scalar>> = s.iter().map(|c| reduce_mod(*p, c)).collect();
            let j = sp.and_then(|sp| jacobian_at(&fp, reduced, &sp));
            if j.is_some_and(|j| linalg::rank(&fp, &j) == target) {
                return Ok(RankCertificate {
                    rank: target,
                    target,
                    sample: s,
                    seed,
                    attempts,
                    modulus: Some(*p),
                });
            }
        }
        let Some(j) = jacobian_at(&field, &hom, &s) else {
            continue;
        };
        let rank = linalg::rank(&field, &j);
        if best.as_ref().is_none_or(|b| rank > b.rank) {
            best = Some(RankCertificate {
                rank,
                target,
                sample: s,
                seed,
                attempts,
                modulus: None,
            });
        }
        if rank == target {
            break;
        }
    }
    match best {
        Some(mut c) if c.rank == target || !field.is_finite() => {
            c.attempts = attempts;
            Ok(c)
        }
        _ => Err(SegreError::ExhaustedSamples),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceResult {
    pub map: PsiMap,
    /// Old input variables as polynomials in the new ones.
    pub substitution: Vec<MultiPoly>,
    pub rank: RankCertificate,
    pub attempts: usize,
}

/// Retry budget for [`slice_to_dim`].
pub const SLICE_RETRIES: usize = 5;

fn slice_vars(n: usize) -> Variables {
    Variables::new((1..=n).map(|i| alloc::format!("t{i}")))
}

/// Random substitution of the `3n − 2` inputs by `n` fresh variables:
/// affine-linear over `Q`, over a finite field the first `n` inputs stay free
/// and each later one becomes a random polynomial of degree at most 2 in
/// them.
fn random_substitution(field: &Field, n: usize, len: usize, rng: &mut SeededRng) -> Vec<MultiPoly> {
    let vars = slice_vars(n);
    let var = |i: usize| MultiPoly::var(field.clone(), vars.clone(), i);
    let constant = |c: Scalar| MultiPoly::constant(field.clone(), vars.clone(), c);
    let coeff = |rng: &mut SeededRng| match field {
        Field::Rationals => field.from_i64(rng.gen_range(-3..=3)),
        _ => field.random_element(rng, 0),
    };
    match field {
        Field::Rationals => (0..len)
            .map(|_| {
                let mut p = constant(coeff(rng));
                for k in 0..n {
                    p = p.add(&var(k).scale(&coeff(rng)));
                }
                p
            })
            .collect(),
        _ => (0..len)
            .map(|j| {
                if j < n {
                    return var(j);
                }
                let mut p = constant(coeff(rng));
                for a in 0..n {
                    p = p.add(&var(a).scale(&coeff(rng)));
                    for b in a..n {
                        p = p.add(&var(a).mul(&var(b)).scale(&coeff(rng)));
                    }
                }
                p
            })
            .collect(),
    }
}

/// The certificate identities are polynomial identities, so they survive
/// substitution as long as the scale does.
fn pulled_back_certificate(psi: &PsiMap, subst: &[MultiPoly]) -> Option<LineCertificate> {
    let c = psi.certificate()?;
    let pull = |p: &MultiPoly| p.compose_horner(subst);
    let scale = pull(&c.scale);
    if scale.is_zero() {
        return None;
    }
    Some(LineCertificate {
        alpha: c.alpha.iter().map(pull).collect(),
        beta: c.beta.iter().map(pull).collect(),
        a: pull(&c.a),
        b: pull(&c.b),
        cq: pull(&c.cq),
        m0: pull(&c.m0),
        factor: pull(&c.factor),
        scale,
    })
}

/// Restricts `Ψ` to an `n`-dimensional subspace of its inputs keeping full
/// rank, retrying up to [`SLICE_RETRIES`] times.
pub fn slice_to_dim(psi: &PsiMap, seed: u64) -> Result<SliceResult, SegreError> {
    let n = psi.dimension();
    let base = dominance_rank(psi, seed)?;
    if !base.is_full() {
        return Err(SegreError::RankDeficient);
    }
    let field = psi.field().clone();
    let mut rng = seeded(seed);
    for attempt in 1..=SLICE_RETRIES {
        let subst = random_substitution(&field, n, psi.num_inputs(), &mut rng);
        let den = psi.denominator().compose_horner(&subst);
        if den.is_zero() {
            continue;
        }
        let nums: Vec<MultiPoly> = psi
            .numerators()
            .iter()
            .map(|p| p.compose_horner(&subst))
            .collect();
        let mut map = psi.with_polys(nums, den);
        if let Some(cert) = pulled_back_certificate(psi, &subst) {
            map = map.with_certificate(cert)?;
        }
        match dominance_rank(&map, seed.wrapping_add(attempt as u64)) {
            Ok(rank) if rank.is_full() => {
                return Ok(SliceResult {
                    map,
                    substitution: subst,
                    rank,
                    attempts: attempt,
                })
            }
            _ => continue,
        }
    }
    Err(SegreError::SliceNotFound(SLICE_RETRIES))
}
