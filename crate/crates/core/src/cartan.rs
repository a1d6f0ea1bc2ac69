//! Root data for `so_N`: type B_n for odd N, type D_n for even N.
//!
//! Weights are stored in orthonormal coordinates `eps_1..eps_n`. The
//! invariant form is scaled so that the shortest simple root has length 2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Series {
    B,
    D,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CartanError {
    #[error("N = {0} is below the supported minimum 5")]
    TooSmall(usize),
    #[error("weight is not dominant")]
    NonDominantWeight,
}

pub type Weight = Vec<BigRational>;

#[derive(Clone, Debug)]
pub struct CartanData {
    pub series: Series,
    pub rank: usize,
    /// `(eps_i, eps_j) = scale * delta_ij`.
    pub scale: i64,
    pub simple_roots: Vec<Weight>,
    pub fundamental: Vec<Weight>,
    pub positive_roots: Vec<Weight>,
    pub cartan_matrix: Vec<Vec<i64>>,
}

fn r(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn unit(n: usize, i: usize) -> Weight {
    (0..n).map(|k| if k == i { r(1) } else { r(0) }).collect()
}

pub fn wadd(a: &Weight, b: &Weight) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn wsub(a: &Weight, b: &Weight) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn wscale(a: &Weight, c: i64) -> Weight {
    a.iter().map(|x| x * r(c)).collect()
}

impl CartanData {
    pub fn for_n(n_big: usize) -> Result<Self, CartanError> {
        if n_big < 5 {
            return Err(CartanError::TooSmall(n_big));
        }
        let n = n_big / 2;
        let series = if n_big % 2 == 1 { Series::B } else { Series::D };
        let scale = if series == Series::B { 2 } else { 1 };
        let e = |i: usize| unit(n, i);
        let mut simple: Vec<Weight> = (0..n - 1).map(|i| wsub(&e(i), &e(i + 1))).collect();
        let mut positive = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                positive.push(wsub(&e(i), &e(j)));
                positive.push(wadd(&e(i), &e(j)));
            }
        }
        let mut fundamental: Vec<Weight> = (0..n).map(|i| (0..n).map(|k| if k <= i { r(1) } else { r(0) }).collect()).collect();
        match series {
            Series::B => {
                simple.push(e(n - 1));
                for i in 0..n {
                    positive.push(e(i));
                }
                fundamental[n - 1] = vec![half(); n];
            }
            Series::D => {
                simple.push(wadd(&e(n - 2), &e(n - 1)));
                fundamental[n - 2] = (0..n).map(|k| if k < n - 1 { half() } else { -half() }).collect();
                fundamental[n - 1] = vec![half(); n];
            }
        }
        let mut cd = CartanData {
            series,
            rank: n,
            scale,
            simple_roots: simple,
            fundamental,
            positive_roots: positive,
            cartan_matrix: vec![],
        };
        cd.cartan_matrix = (0..n)
            .map(|i| (0..n).map(|j| cd.coroot_pairing(i, &cd.simple_roots[j]).to_i64().expect("integral")).collect())
            .collect();
        Ok(cd)
    }

    pub fn form(&self, a: &Weight, b: &Weight) -> BigRational {
        let s: BigRational = a.iter().zip(b).map(|(x, y)| x * y).sum();
        s * r(self.scale)
    }

    /// `(alpha_i^vee, lambda)` for the 0-based node `i`.
    pub fn coroot_pairing(&self, i: usize, lam: &Weight) -> BigRational {
        let a = &self.simple_roots[i];
        r(2) * self.form(a, lam) / self.form(a, a)
    }

    /// Exponent `e` with `q_DJ = v^e`: the form normalization makes the
    /// Drinfeld-Jimbo parameter `q^(1/2)` for B_n and `q` for D_n.
    pub fn dj_v_exp(&self) -> i64 {
        match self.series {
            Series::B => 1,
            Series::D => 2,
        }
    }

    /// `v`-exponent of `q_DJ^{(alpha_i, lambda)}`.
    pub fn k_vexp(&self, i: usize, lam: &Weight) -> i32 {
        let e = self.form(&self.simple_roots[i], lam) * r(self.dj_v_exp());
        assert!(e.is_integer(), "non-integral K exponent");
        e.to_integer().to_i32().expect("small exponent")
    }

    /// `v`-exponent of `q_i = q_DJ^{(alpha_i, alpha_i)/2}`.
    pub fn qi_vexp(&self, i: usize) -> i32 {
        let a = &self.simple_roots[i];
        let e = self.form(a, a) * r(self.dj_v_exp()) / r(2);
        e.to_integer().to_i32().expect("small exponent")
    }

    pub fn weyl_vector(&self) -> Weight {
        let mut s = vec![r(0); self.rank];
        for a in &self.positive_roots {
            s = wadd(&s, a);
        }
        s.iter().map(|x| x / r(2)).collect()
    }

    pub fn is_dominant(&self, lam: &Weight) -> bool {
        (0..self.rank).all(|i| {
            let p = self.coroot_pairing(i, lam);
            p.is_integer() && !p.is_negative()
        })
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lam: &Weight) -> Result<BigInt, CartanError> {
        if !self.is_dominant(lam) {
            return Err(CartanError::NonDominantWeight);
        }
        let rho = self.weyl_vector();
        let lr = wadd(lam, &rho);
        let mut num = BigRational::one();
        for a in &self.positive_roots {
            num *= self.form(&lr, a) / self.form(&rho, a);
        }
        assert!(num.is_integer() && !num.is_zero());
        Ok(num.to_integer())
    }

    /// `lambda_y = 2 varpi_1 - alpha_1`.
    pub fn y_weight(&self) -> Weight {
        wsub(&wscale(&self.fundamental[0], 2), &self.simple_roots[0])
    }

    /// Highest weight `2 l varpi_1 + k lambda_y` of the `(k, l)` eigenspace.
    pub fn spherical_weight(&self, k: u64, l: u64) -> Weight {
        let z = wscale(&self.fundamental[0], 2 * l as i64);
        let y = self.y_weight().iter().map(|x| x * BigRational::from_integer(BigInt::from(k))).collect();
        wadd(&z, &y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coroots_dual_to_fundamentals() {
        for n in 5..=10 {
            let c = CartanData::for_n(n).unwrap();
            for i in 0..c.rank {
                for j in 0..c.rank {
                    let p = c.coroot_pairing(i, &c.fundamental[j]);
                    assert_eq!(p, r((i == j) as i64));
                }
            }
            let shortest = (0..c.rank).map(|i| c.form(&c.simple_roots[i], &c.simple_roots[i])).min().unwrap();
            assert_eq!(shortest, r(2));
        }
    }

    #[test]
    fn cartan_matrices() {
        let b2 = CartanData::for_n(5).unwrap();
        assert_eq!(b2.cartan_matrix, vec![vec![2, -1], vec![-2, 2]]);
        let d3 = CartanData::for_n(6).unwrap();
        assert_eq!(d3.cartan_matrix, vec![vec![2, -1, -1], vec![-1, 2, 0], vec![-1, 0, 2]]);
    }

    #[test]
    fn vector_rep_dimension() {
        for n in 5..=10 {
            let c = CartanData::for_n(n).unwrap();
            assert_eq!(c.weyl_dimension(&c.fundamental[0]).unwrap(), BigInt::from(n));
        }
    }
}
