//! Orbifold Euler characteristics and Masur-Veech volumes of the principal
//! stratum, each by more than one route.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::exact::{bernoulli_number, factorial, ExactRational};
use crate::hodge::lambda_psi_integral;
use crate::intersection::{dimension, is_stable, psi_integral, IntersectionError};
use crate::invariants::check_segre_chern;
use crate::omega::{omega_closed_form_r1, omega_integral, OmegaError, OmegaSpec};
use crate::poly::{partitions, TautPolynomial};
use crate::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiRoute {
    HarerZagier,
    HodgeSum,
    Omega,
}

impl ChiRoute {
    pub fn name(self) -> &'static str {
        match self {
            ChiRoute::HarerZagier => "harer_zagier",
            ChiRoute::HodgeSum => "hodge_sum",
            ChiRoute::Omega => "omega",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MvRoute {
    Omega,
    HodgeSum,
}

impl MvRoute {
    pub fn name(self) -> &'static str {
        match self {
            MvRoute::Omega => "omega",
            MvRoute::HodgeSum => "hodge_sum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCharResult {
    pub g: u32,
    pub n: usize,
    pub value: ExactRational,
    pub route: ChiRoute,
}

/// `MV_{g,n} / pi^{6g-6+2n}` without the labelling constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MVResult {
    pub g: u32,
    pub n: usize,
    pub value: ExactRational,
    pub route: MvRoute,
}

#[derive(Debug, thiserror::Error)]
pub enum ApplicationError {
    #[error("(g, n) = ({0}, {1}) is not stable")]
    Unstable(u32, usize),
    #[error("genus {0} is outside the identity's range (g >= 2)")]
    GenusRange(u32),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
}

fn stable(g: u32, n: usize) -> Result<(), ApplicationError> {
    if is_stable(g, n) {
        Ok(())
    } else {
        Err(ApplicationError::Unstable(g, n))
    }
}

fn sign(k: i64) -> ExactRational {
    if k.rem_euclid(2) == 0 {
        ExactRational::one()
    } else {
        -ExactRational::one()
    }
}

fn fact(k: u32) -> ExactRational {
    ExactRational::from_bigint(factorial(k))
}

/// Harer-Zagier closed form.
pub fn chi_harer_zagier(g: u32, n: usize) -> Result<EulerCharResult, ApplicationError> {
    stable(g, n)?;
    let ni = n as i64;
    let value = match g {
        0 => sign(ni - 3) * fact(n as u32 - 3),
        1 => sign(ni) * fact(n as u32 - 1) / ExactRational::from(12),
        _ => {
            let g2 = 2 * g;
            sign(ni) * fact(g2 - 3 + n as u32) * bernoulli_number(g2 as usize)
                / (ExactRational::from(g2 as i64) * fact(g2 - 2))
        }
    };
    Ok(EulerCharResult { g, n, value, route: ChiRoute::HarerZagier })
}

/// Multisets of `len` non-negative integers summing to `total`, as
/// non-increasing vectors, with `1 / prod mult!`.
fn multisets(len: usize, total: u32) -> Vec<(Vec<u32>, ExactRational)> {
    let mut out = Vec::new();
    for p in partitions(total) {
        if p.len() > len {
            continue;
        }
        let mut v = p.clone();
        v.resize(len, 0);
        let mut w = ExactRational::one();
        let mut i = 0;
        while i < v.len() {
            let m = v[i..].iter().take_while(|&&y| y == v[i]).count();
            w /= fact(m as u32);
            i += m;
        }
        out.push((v, w));
    }
    if total == 0 && len == 0 {
        out.push((Vec::new(), ExactRational::one()));
    }
    out.dedup();
    out
}

/// `sum_l 1/l! sum_i int_{g,n+l} lambda_i prod_j psi_{n+j}^2 f(psi_{n+j})`
/// where `f(y) = sum_k c_k y^k`; only the coefficients up to the dimension
/// are read. The sum over the `l` added points runs over multisets of
/// exponents.
fn lambda_added_points_sum(g: u32, n: usize, f: &[ExactRational]) -> Result<ExactRational, ApplicationError> {
    let dim = dimension(g, n);
    let mut acc = ExactRational::zero();
    for l in 0..=dim.max(0) as usize {
        if !is_stable(g, n + l) {
            continue;
        }
        for i in 0..=g {
            let rest = dim - l as i64 - i as i64;
            if rest < 0 {
                continue;
            }
            for (ks, w) in multisets(l, rest as u32) {
                let mut coef = w;
                for &k in &ks {
                    coef *= f.get(k as usize).cloned().unwrap_or_default();
                }
                if coef.is_zero() {
                    continue;
                }
                let mut d = vec![0u32; n];
                d.extend(ks.iter().map(|&k| k + 2));
                acc += coef * lambda_psi_integral(g, &d, i)?;
            }
        }
    }
    Ok(acc)
}

/// Linear Hodge integrals with the added points weighted by
/// `psi^2 / (1 + psi)`.
pub fn chi_via_hodge(g: u32, n: usize) -> Result<EulerCharResult, ApplicationError> {
    stable(g, n)?;
    let dim = dimension(g, n);
    let f: Vec<ExactRational> = (0..=dim).map(sign).collect();
    let value = sign(dim) * lambda_added_points_sum(g, n, &f)?;
    Ok(EulerCharResult { g, n, value, route: ChiRoute::HodgeSum })
}

/// Genus one through the two explicit Hodge terms on `M_{1,1}` and
/// `M_{1,2}`; `None` elsewhere.
pub fn chi_special_low(g: u32, n: usize) -> Option<ExactRational> {
    match (g, n) {
        (0, 3) => Some(ExactRational::one()),
        (1, 1) => {
            // int Lambda(-1) - int Lambda(-1) psi_2^2
            let a = lambda_psi_integral(1, &[0], 0).ok()? - lambda_psi_integral(1, &[0], 1).ok()?;
            let b = lambda_psi_integral(1, &[0, 2], 0).ok()? - lambda_psi_integral(1, &[0, 2], 1).ok()?;
            Some(a - b)
        }
        _ => None,
    }
}

/// `int Omega(1, -1; 0)` by the stable-graph sum.
pub fn chi_via_omega(g: u32, n: usize) -> Result<EulerCharResult, ApplicationError> {
    stable(g, n)?;
    let spec = OmegaSpec::new(1, -1, vec![0; n], ExactRational::one());
    let one = TautPolynomial::one(n, dimension(g, n) as u32);
    let value = omega_integral(g, n, &spec, &one)?;
    Ok(EulerCharResult { g, n, value, route: ChiRoute::Omega })
}

/// `int Lambda(-1) exp(-sum kappa_m / m)`, the r = 1 closed form of the
/// same class.
pub fn chi_via_closed_form(g: u32, n: usize) -> Result<ExactRational, ApplicationError> {
    stable(g, n)?;
    let cf = omega_closed_form_r1(g, n, -1, &vec![0; n], &ExactRational::one())?;
    Ok(cf.integral(&TautPolynomial::one(n, dimension(g, n) as u32))?)
}

pub fn chi(g: u32, n: usize, route: ChiRoute) -> Result<EulerCharResult, ApplicationError> {
    match route {
        ChiRoute::HarerZagier => chi_harer_zagier(g, n),
        ChiRoute::HodgeSum => chi_via_hodge(g, n),
        ChiRoute::Omega => chi_via_omega(g, n),
    }
}

/// `chi_{g,n+1} = -(2g - 2 + n) chi_{g,n}` on every route.
pub fn chi_recursion_check(g: u32, n: usize) -> Result<CheckReport, ApplicationError> {
    stable(g, n)?;
    let factor = -ExactRational::from(2 * g as i64 - 2 + n as i64);
    let mut labels = Vec::new();
    let mut expected = Vec::new();
    let mut got = Vec::new();
    for route in [ChiRoute::HarerZagier, ChiRoute::HodgeSum, ChiRoute::Omega] {
        let lo = chi(g, n, route)?.value;
        let hi = chi(g, n + 1, route)?.value;
        labels.push(route.name().to_string());
        expected.push(&factor * &lo);
        got.push(hi);
    }
    let p = json!({"g": g, "n": n});
    Ok(CheckReport::pairings("chi_recursion", p, &labels, &expected, &got))
}

/// `sum_{l>=1} (-1)^l/l! sum_{mu >= 1} int_{g,l} Lambda(-1) prod psi_i^{mu_i + 1}`
/// against `B_{2g} / (2g (2g - 2))`. The sign `(-1)^l` is what the Hodge
/// sum for `chi_{g,0}` produces; without it the sum is a different number
/// (1/180 at g = 2), which the report records in its note.
pub fn dyz_identity_check(g: u32) -> Result<CheckReport, ApplicationError> {
    if g < 2 {
        return Err(ApplicationError::GenusRange(g));
    }
    let dim = dimension(g, 0);
    let mut lhs = ExactRational::zero();
    let mut unsigned = ExactRational::zero();
    for l in 1..=dim as usize {
        let top = dimension(g, l);
        for i in 0..=g {
            // prod psi^{mu+1} with mu >= 1: exponents e_j = k_j + 2
            let rest = top - i as i64 - 2 * l as i64;
            if rest < 0 {
                continue;
            }
            for (ks, w) in multisets(l, rest as u32) {
                let d: Vec<u32> = ks.iter().map(|&k| k + 2).collect();
                let term = w * sign(i as i64) * lambda_psi_integral(g, &d, i)?;
                lhs += sign(l as i64) * &term;
                unsigned += term;
            }
        }
    }
    let g2 = 2 * g as i64;
    let rhs = bernoulli_number(g2 as usize) / ExactRational::from(g2 * (g2 - 2));
    Ok(CheckReport::scalar("dyz_identity", json!({"g": g}), &rhs, &lhs)
        .with_note(format!("sum without (-1)^l: {unsigned}")))
}

/// `(-1)^{3g-3+n} int Omega(1, 2; 0)`.
pub fn mv_via_omega(g: u32, n: usize) -> Result<MVResult, ApplicationError> {
    stable(g, n)?;
    let dim = dimension(g, n);
    let spec = OmegaSpec::new(1, 2, vec![0; n], ExactRational::one());
    let value = sign(dim) * omega_integral(g, n, &spec, &TautPolynomial::one(n, dim as u32))?;
    Ok(MVResult { g, n, value, route: MvRoute::Omega })
}

/// Linear Hodge integrals with the added points weighted by `psi^2`.
pub fn mv_via_hodge(g: u32, n: usize) -> Result<MVResult, ApplicationError> {
    stable(g, n)?;
    let value = lambda_added_points_sum(g, n, &[ExactRational::one()])?;
    Ok(MVResult { g, n, value, route: MvRoute::HodgeSum })
}

pub fn mv(g: u32, n: usize, route: MvRoute) -> Result<MVResult, ApplicationError> {
    match route {
        MvRoute::Omega => mv_via_omega(g, n),
        MvRoute::HodgeSum => mv_via_hodge(g, n),
    }
}

/// Segre form of the volume. First certifies
/// `Omega^{[-1]}(1, 2; 0) Omega^{[1]}(1, -1; 0) = 1` against all test
/// monomials, then integrates the explicit inverse
/// `Lambda(1) exp(sum kappa_m / m)` of the r = 1 closed form and compares it
/// with the volume.
pub fn mv_segre_check(g: u32, n: usize) -> Result<CheckReport, ApplicationError> {
    stable(g, n)?;
    let one = ExactRational::one();
    let inversion = check_segre_chern(g, n, -1, &one)?;
    let cf = omega_closed_form_r1(g, n, -1, &vec![0; n], &one)?;
    let mut inv = cf.clone();
    inv.t = -&cf.t;
    inv.u = cf.u.iter().map(|v| -v).collect();
    let segre = inv.integral(&TautPolynomial::one(n, dimension(g, n) as u32))?;
    let volume = mv_via_omega(g, n)?.value;
    let p = json!({"g": g, "n": n});
    let mut rep = CheckReport::scalar("mv_segre", p, &volume, &segre);
    if !inversion.pass {
        rep.pass = false;
        rep = rep.with_note("inversion pairings failed");
    }
    Ok(rep.with_note(format!("inversion certified on {} pairings", inversion.pairings)))
}

/// The labelling constant `2^{2g+1} (4g - 4 + n)! / (6g - 7 + 2n)!`, kept
/// apart from the volumes.
pub fn mv_normalization_constant(g: u32, n: usize) -> Result<ExactRational, ApplicationError> {
    stable(g, n)?;
    let a = 4 * g as i64 - 4 + n as i64;
    let b = 6 * g as i64 - 7 + 2 * n as i64;
    if a < 0 || b < 0 {
        // (0, 3): 4g - 4 + n = -1; the constant is not defined there
        return Err(ApplicationError::Unstable(g, n));
    }
    let two = ExactRational::from(2).pow(2 * g as i32 + 1);
    Ok(two * fact(a as u32) / fact(b as u32))
}

/// Plain psi-integral used by the genus-zero shortcuts.
pub fn genus_zero_psi(d: &[u32]) -> Result<ExactRational, ApplicationError> {
    Ok(psi_integral(0, d)?)
}

/// Every stable `(g, n)` with `0 <= 3g - 3 + n <= max_dim`, ordered by
/// dimension, then genus.
pub fn stable_types(max_dim: i64) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for d in 0..=max_dim {
        for g in 0..=((d + 3) / 3) as u32 {
            let n = d + 3 - 3 * g as i64;
            if n >= 0 && is_stable(g, n as usize) {
                out.push((g, n as usize));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn chi_small() {
        assert_eq!(chi_harer_zagier(0, 3).unwrap().value, q(1, 1));
        assert_eq!(chi_harer_zagier(1, 1).unwrap().value, q(-1, 12));
        assert_eq!(chi_harer_zagier(2, 1).unwrap().value, q(1, 120));
        assert_eq!(chi_via_hodge(1, 1).unwrap().value, q(-1, 12));
        assert_eq!(chi_via_hodge(0, 4).unwrap().value, q(-1, 1));
        assert_eq!(chi_via_omega(1, 2).unwrap().value, q(1, 12));
        assert_eq!(chi_special_low(1, 1), Some(q(-1, 12)));
    }

    #[test]
    fn dyz_genus_two() {
        let rep = dyz_identity_check(2).unwrap();
        assert!(rep.pass, "{}", rep.to_json_line());
        assert_eq!(rep.expected, "-1/240");
    }

    #[test]
    fn mv_routes() {
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2), (2, 0)] {
            assert_eq!(mv_via_omega(g, n).unwrap().value, mv_via_hodge(g, n).unwrap().value, "({g},{n})");
        }
        assert_eq!(mv_via_hodge(0, 3).unwrap().value, q(1, 1));
        assert!(mv_segre_check(1, 1).unwrap().pass);
    }
}
