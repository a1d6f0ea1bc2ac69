//! Eigenvalues of the Dolbeault Laplacian on zero forms, indexed by `(k, l)`,
//! their multiplicities and divergence of the spectrum.
//!
//! With `A_k = (k)_{q^2}` and `B_k = (k)_{q^-2}`,
//! `lambda(k, l) = theta A_k B_{k-1} + mu_y A_k + theta' A_l A_k
//!  + theta'' B_l B_k + mu_z B_l + theta''' B_l A_{l-1}`.

use crate::cartan::{CartanData, CartanError};
use crate::field::{fmt_rational, qint, SqrtPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("q = {0} must exceed 1")]
    QNotAboveOne(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("shell minimum does not clear the bound within the scanned shells")]
    BoundNotCleared(Box<DivergenceReport>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralParams {
    pub theta: BigRational,
    pub theta1: BigRational,
    pub theta2: BigRational,
    pub theta3: BigRational,
    pub mu_y: BigRational,
    pub mu_z: BigRational,
    pub q: BigRational,
    /// `N`, selecting the root system for multiplicities.
    pub n: usize,
}

fn ri(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl SpectralParams {
    /// The interior sample `(theta, theta', theta'', theta''', mu_y, mu_z) = (0, 1, 0, 1, 1, 1)`.
    pub fn default_for(n: usize, q: BigRational) -> Self {
        SpectralParams { theta: ri(0), theta1: ri(1), theta2: ri(0), theta3: ri(1), mu_y: ri(1), mu_z: ri(1), q, n }
    }

    /// `-(1 - q^-2) mu_y`, the smallest admissible `theta`.
    pub fn theta_boundary(&self) -> BigRational {
        -(ri(1) - (&self.q * &self.q).recip()) * &self.mu_y
    }

    pub fn as_strings(&self) -> ParamStrings {
        ParamStrings {
            theta: fmt_rational(&self.theta),
            theta1: fmt_rational(&self.theta1),
            theta2: fmt_rational(&self.theta2),
            theta3: fmt_rational(&self.theta3),
            mu_y: fmt_rational(&self.mu_y),
            mu_z: fmt_rational(&self.mu_z),
            q: fmt_rational(&self.q),
            n: self.n,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamStrings {
    pub theta: String,
    pub theta1: String,
    pub theta2: String,
    pub theta3: String,
    pub mu_y: String,
    pub mu_z: String,
    pub q: String,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub name: &'static str,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub params: ParamStrings,
    pub constraints: Vec<Constraint>,
    pub ok: bool,
    /// `theta` strictly above its lower bound.
    pub strict_interior: bool,
}

pub fn validate_params(p: &SpectralParams) -> ValidationReport {
    let zero = ri(0);
    let bound = p.theta_boundary();
    let constraints = vec![
        Constraint { name: "q > 1", ok: p.q > ri(1) },
        Constraint { name: "mu_y > 0", ok: p.mu_y > zero },
        Constraint { name: "mu_z > 0", ok: p.mu_z > zero },
        Constraint { name: "theta' > 0", ok: p.theta1 > zero },
        Constraint { name: "theta''' > 0", ok: p.theta3 > zero },
        Constraint { name: "theta >= -(1 - q^-2) mu_y", ok: p.theta >= bound },
    ];
    let ok = constraints.iter().all(|c| c.ok);
    ValidationReport { params: p.as_strings(), constraints, ok, strict_interior: ok && p.theta > bound }
}

/// `(k)_{q^{2s}}` at the rational `q`, through the symbolic q-integer.
fn qint_at(p: &SqrtPoint, k: u64, s: i32) -> BigRational {
    let x = qint(k as u32, 4 * s);
    p.eval(&x).expect("Laurent polynomial").as_rational().cloned().expect("even powers of v are rational")
}

/// Exact `lambda(k, l)`.
pub fn eigenvalue(k: u64, l: u64, p: &SpectralParams) -> BigRational {
    let pt = SqrtPoint::new(p.q.clone());
    let a = |x: u64| qint_at(&pt, x, 1);
    let b = |x: u64| qint_at(&pt, x, -1);
    let (ak, al) = (a(k), a(l));
    let (bk, bl) = (b(k), b(l));
    &p.theta * &ak * b(k.saturating_sub(1))
        + &ak * &p.mu_y
        + &al * &ak * &p.theta1
        + &bl * &bk * &p.theta2
        + &bl * &p.mu_z
        + &bl * a(l.saturating_sub(1)) * &p.theta3
}

/// Weyl dimension of the highest weight `2 l varpi_1 + k lambda_y`.
pub fn multiplicity(k: u64, l: u64, cartan: &CartanData) -> Result<BigInt, CartanError> {
    cartan.weyl_dimension(&cartan.spherical_weight(k, l))
}

fn ser_rat<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

fn ser_rats<S: Serializer>(x: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(fmt_rational))
}

fn ser_int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(x) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRecord {
    pub k: u64,
    pub l: u64,
    #[serde(serialize_with = "ser_rat")]
    pub value: BigRational,
    #[serde(serialize_with = "ser_int")]
    pub multiplicity: BigInt,
    /// Highest weight in orthonormal coordinates.
    #[serde(serialize_with = "ser_rats")]
    pub weight: Vec<BigRational>,
}

/// All cells `k <= kmax`, `l <= lmax`, sorted by value, ties by `(k + l, k)`.
pub fn spectrum_table(p: &SpectralParams, kmax: u64, lmax: u64) -> Result<Vec<EigenRecord>, SpectrumError> {
    if p.q <= ri(1) {
        return Err(SpectrumError::QNotAboveOne(fmt_rational(&p.q)));
    }
    let cartan = CartanData::for_n(p.n)?;
    let cells: Vec<(u64, u64)> = (0..=kmax).flat_map(|k| (0..=lmax).map(move |l| (k, l))).collect();
    let mut recs = cells
        .par_iter()
        .map(|&(k, l)| {
            Ok(EigenRecord {
                k,
                l,
                value: eigenvalue(k, l, p),
                multiplicity: multiplicity(k, l, &cartan)?,
                weight: cartan.spherical_weight(k, l),
            })
        })
        .collect::<Result<Vec<_>, CartanError>>()?;
    recs.sort_by(|x, y| x.value.cmp(&y.value).then((x.k + x.l, x.k).cmp(&(y.k + y.l, y.k))));
    Ok(recs)
}

/// Integer evaluation of a whole shell `k + l = m`. For `q = a/b` and
/// `d = a^2 - b^2`, every `lambda(k, l)` on the shell times
/// `C_m = d^2 a^{2m} b^{2m}` and the common parameter denominator `L` is an
/// integer, so comparisons inside a shell need no rational arithmetic.
struct ShellEngine {
    a2: BigInt,
    b2: BigInt,
    d: BigInt,
    /// `a^{2j}`, `b^{2j}`
    pa: Vec<BigInt>,
    pb: Vec<BigInt>,
    /// `S_k = a^{2k} - b^{2k}`
    s: Vec<BigInt>,
    /// parameters times `L`
    theta: BigInt,
    theta1: BigInt,
    theta2: BigInt,
    theta3: BigInt,
    mu_y: BigInt,
    mu_z: BigInt,
    lcm: BigInt,
}

impl ShellEngine {
    fn new(p: &SpectralParams, shell_max: usize) -> Self {
        let a = p.q.numer().clone();
        let b = p.q.denom().clone();
        let a2 = &a * &a;
        let b2 = &b * &b;
        let mut pa = vec![BigInt::one()];
        let mut pb = vec![BigInt::one()];
        for j in 0..=shell_max + 1 {
            pa.push(&pa[j] * &a2);
            pb.push(&pb[j] * &b2);
        }
        let s = (0..=shell_max + 1).map(|k| &pa[k] - &pb[k]).collect();
        let params = [&p.theta, &p.theta1, &p.theta2, &p.theta3, &p.mu_y, &p.mu_z];
        let lcm = params.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let int = |x: &BigRational| (x * BigRational::from_integer(lcm.clone())).to_integer();
        ShellEngine {
            d: &a2 - &b2,
            a2,
            b2,
            pa,
            pb,
            s,
            theta: int(&p.theta),
            theta1: int(&p.theta1),
            theta2: int(&p.theta2),
            theta3: int(&p.theta3),
            mu_y: int(&p.mu_y),
            mu_z: int(&p.mu_z),
            lcm,
        }
    }

    fn denominator(&self, m: usize) -> BigInt {
        &self.d * &self.d * &self.pa[m] * &self.pb[m] * &self.lcm
    }

    /// Scaled values `lambda(k, m - k) * C_m * L` for `k = 0..=m`.
    fn shell(&self, m: usize) -> Vec<BigInt> {
        let ab = &self.a2 * &self.b2;
        let mixed = &self.theta1 * &self.b2 * &self.b2 * &self.pa[m] + &self.theta2 * &self.a2 * &self.a2 * &self.pb[m];
        let ky = &self.mu_y * &self.b2 * &self.d * &self.pa[m];
        let kz = &self.mu_z * &self.a2 * &self.d * &self.pb[m];
        (0..=m)
            .map(|k| {
                let l = m - k;
                let mut v = BigInt::zero();
                if k >= 1 {
                    if !self.theta.is_zero() {
                        v += &self.theta * &self.s[k] * &self.s[k - 1] * &ab * &self.pa[l + 1] * &self.pb[l];
                    }
                    v += &ky * &self.s[k] * &self.pb[l];
                }
                if k >= 1 && l >= 1 {
                    v += &mixed * &self.s[k] * &self.s[l];
                }
                if l >= 1 {
                    v += &kz * &self.s[l] * &self.pa[k];
                    v += &self.theta3 * &self.s[l] * &self.s[l - 1] * &ab * &self.pa[k] * &self.pb[k + 1];
                }
                v
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShellMin {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    #[serde(serialize_with = "ser_rat")]
    pub value: BigRational,
    /// Minimum over the cells with `l >= 1`, absent for `m = 0`.
    #[serde(serialize_with = "ser_opt_rat")]
    pub off_lane: Option<BigRational>,
}

fn ser_opt_rat<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&fmt_rational(v)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LaneReport {
    /// `lambda(m, 0)` at the last scanned shell.
    #[serde(serialize_with = "ser_rat")]
    pub last: BigRational,
    pub increasing: bool,
    /// `mu_y / (1 - q^-2)` when `theta` sits on its lower bound.
    #[serde(serialize_with = "ser_opt_rat")]
    pub limit: Option<BigRational>,
    /// Every scanned value stays below the limit.
    pub below_limit: Option<bool>,
    /// `limit - last`
    #[serde(serialize_with = "ser_opt_rat")]
    pub gap: Option<BigRational>,
    /// The lane exceeds the bound somewhere in the scanned range.
    pub exceeds_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub params: ParamStrings,
    pub params_valid: bool,
    pub boundary_theta: bool,
    #[serde(serialize_with = "ser_rat")]
    pub bound: BigRational,
    pub shell_max: usize,
    /// Smallest `m0` with every shell minimum for `m0 <= m <= shell_max` above the bound.
    pub m0: Option<usize>,
    pub cleared: bool,
    /// The same with the `l = 0` lane left out.
    pub m0_off_lane: Option<usize>,
    pub cells_below_bound: usize,
    /// Summed Weyl dimensions of the cells below the bound.
    pub multiplicity_below_bound: String,
    pub lane_l0: LaneReport,
    pub shell_minima: Vec<ShellMin>,
}

fn last_run_start(flags: &[bool]) -> Option<usize> {
    if !*flags.last()? {
        return None;
    }
    let mut i = flags.len() - 1;
    while i > 0 && flags[i - 1] {
        i -= 1;
    }
    Some(i)
}

/// Shell minima `min_{k+l=m} lambda(k, l)` for `m <= shell_max`, the first
/// shell from which all later scanned minima exceed `bound`, and the total
/// multiplicity of the eigenvalues below it.
pub fn check_divergence(p: &SpectralParams, shell_max: usize, bound: &BigRational) -> Result<DivergenceReport, SpectrumError> {
    if p.q <= ri(1) {
        return Err(SpectrumError::QNotAboveOne(fmt_rational(&p.q)));
    }
    let cartan = CartanData::for_n(p.n)?;
    let eng = ShellEngine::new(p, shell_max);
    // (minimum, lambda(m, 0), cells below the bound) per shell
    type Shell = (ShellMin, BigRational, Vec<(usize, usize)>);
    let per_shell: Vec<Shell> = (0..=shell_max)
        .into_par_iter()
        .map(|m| {
            let vals = eng.shell(m);
            let den = eng.denominator(m);
            // for an integer v, v < ceil(x) iff v < x
            let scaled_bound = (bound * BigRational::from_integer(den.clone())).ceil().to_integer();
            let (kmin, vmin) = vals.iter().enumerate().min_by(|x, y| x.1.cmp(y.1)).expect("nonempty shell");
            let off = vals[..m].iter().min().map(|v| BigRational::new(v.clone(), den.clone()));
            let below: Vec<(usize, usize)> = vals
                .iter()
                .enumerate()
                .filter(|(_, v)| **v < scaled_bound)
                .map(|(k, _)| (k, m - k))
                .collect();
            let lane = BigRational::new(vals[m].clone(), den.clone());
            let sm = ShellMin { m, k: kmin, l: m - kmin, value: BigRational::new(vmin.clone(), den), off_lane: off };
            (sm, lane, below)
        })
        .collect();
    let above: Vec<bool> = per_shell.iter().map(|(s, _, _)| &s.value > bound).collect();
    let above_off: Vec<bool> =
        per_shell.iter().skip(1).map(|(s, _, _)| s.off_lane.as_ref().is_some_and(|v| v > bound)).collect();
    let m0 = last_run_start(&above);
    let m0_off_lane = last_run_start(&above_off).map(|i| i + 1);
    let mut cells_below_bound = 0;
    let mut mult = BigInt::zero();
    for (_, _, below) in &per_shell {
        for &(k, l) in below {
            cells_below_bound += 1;
            mult += multiplicity(k as u64, l as u64, &cartan)?;
        }
    }
    let lane: Vec<&BigRational> = per_shell.iter().map(|(_, v, _)| v).collect();
    let boundary_theta = p.theta == p.theta_boundary();
    let limit = boundary_theta.then(|| &p.mu_y / (ri(1) - (&p.q * &p.q).recip()));
    let last = (*lane.last().expect("at least one shell")).clone();
    let lane_l0 = LaneReport {
        increasing: lane.windows(2).skip(1).all(|w| w[1] > w[0]),
        below_limit: limit.as_ref().map(|lim| lane.iter().all(|v| *v < lim)),
        gap: limit.as_ref().map(|lim| lim - &last),
        limit,
        exceeds_bound: lane.iter().any(|v| *v > bound),
        last,
    };
    let report = DivergenceReport {
        params: p.as_strings(),
        params_valid: validate_params(p).ok,
        boundary_theta,
        bound: bound.clone(),
        shell_max,
        cleared: m0.is_some(),
        m0,
        m0_off_lane,
        cells_below_bound,
        multiplicity_below_bound: mult.to_string(),
        lane_l0,
        shell_minima: per_shell.into_iter().map(|(s, _, _)| s).collect(),
    };
    if report.cleared {
        Ok(report)
    } else {
        Err(SpectrumError::BoundNotCleared(Box::new(report)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_values() {
        let p = SpectralParams::default_for(5, q(11, 10));
        assert!(eigenvalue(0, 0, &p).is_zero());
        assert_eq!(eigenvalue(1, 0, &p), p.mu_y);
        assert_eq!(eigenvalue(0, 1, &p), p.mu_z);
        let qi2 = (&p.q * &p.q).recip();
        assert_eq!(eigenvalue(0, 2, &p), (ri(1) + qi2) * (&p.mu_z + &p.theta3));
    }

    #[test]
    fn validation() {
        let p = SpectralParams::default_for(5, q(11, 10));
        assert!(validate_params(&p).ok);
        let mut bad = p.clone();
        bad.theta1 = ri(-1);
        let r = validate_params(&bad);
        assert!(!r.ok);
        assert!(!r.constraints.iter().find(|c| c.name == "theta' > 0").unwrap().ok);
        let mut edge = p.clone();
        edge.theta = edge.theta_boundary();
        let r = validate_params(&edge);
        assert!(r.ok && !r.strict_interior);
    }

    #[test]
    fn shell_engine_matches_direct_values() {
        let mut p = SpectralParams::default_for(6, q(7, 5));
        p.theta = q(-1, 3);
        p.theta2 = q(-2, 7);
        p.mu_z = q(5, 2);
        let eng = ShellEngine::new(&p, 8);
        for m in 0..=8 {
            let den = eng.denominator(m);
            for (k, v) in eng.shell(m).into_iter().enumerate() {
                assert_eq!(BigRational::new(v, den.clone()), eigenvalue(k as u64, (m - k) as u64, &p));
            }
        }
    }

    #[test]
    fn table_order_and_first_record() {
        let p = SpectralParams::default_for(5, q(11, 10));
        let t = spectrum_table(&p, 5, 5).unwrap();
        assert_eq!(t.len(), 36);
        assert_eq!((t[0].k, t[0].l), (0, 0));
        assert!(t[0].value.is_zero());
        assert!(t[0].multiplicity.is_one());
        assert!(t.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn multiplicities() {
        let so7 = CartanData::for_n(7).unwrap();
        assert_eq!(multiplicity(1, 0, &so7).unwrap(), BigInt::from(21));
        let so5 = CartanData::for_n(5).unwrap();
        assert_eq!(multiplicity(0, 0, &so5).unwrap(), BigInt::from(1));
        // 2 varpi_1 of so_5: the traceless symmetric square, 14
        assert_eq!(multiplicity(0, 1, &so5).unwrap(), BigInt::from(14));
    }

    #[test]
    fn zero_bound_clears_at_one() {
        let p = SpectralParams::default_for(5, q(11, 10));
        let r = check_divergence(&p, 10, &ri(0)).unwrap();
        assert_eq!(r.m0, Some(1));
    }
}
