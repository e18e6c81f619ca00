//! Unit-modulus phases, either exact roots of unity `exp(2πik/N)` or floats.

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::linalg::C64;

/// Tolerance on `|z| = 1` for float phases.
pub const UNIT_TOL: f64 = 1e-9;

/// Ingestion tolerance when snapping a float to a root of unity.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Phase {
    /// `exp(2πi k / n)` with `0 <= k < n`.
    Exact {
        k: u64,
        #[serde(rename = "N")]
        n: u64,
    },
    Float {
        re: f64,
        im: f64,
    },
}

impl Phase {
    pub const ONE: Phase = Phase::Exact { k: 0, n: 1 };

    pub fn root(k: i64, n: u64) -> Phase {
        assert!(n > 0, "root of unity order must be positive");
        let k = k.rem_euclid(n as i64) as u64;
        Phase::Exact { k, n }.reduced()
    }

    pub fn sign(negative: bool) -> Phase {
        if negative {
            Phase::Exact { k: 1, n: 2 }
        } else {
            Phase::ONE
        }
    }

    pub fn from_complex(z: C64) -> Phase {
        Phase::Float { re: z.re, im: z.im }
    }

    fn reduced(self) -> Phase {
        match self {
            Phase::Exact { k, n } => {
                let g = k.gcd(&n).max(1);
                Phase::Exact { k: k / g, n: n / g }
            }
            f => f,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Phase::Exact { .. })
    }

    /// Order `N` of the exact representation, if any.
    pub fn order(&self) -> Option<u64> {
        match self {
            Phase::Exact { n, .. } => Some(*n),
            Phase::Float { .. } => None,
        }
    }

    pub fn to_complex(&self) -> C64 {
        match *self {
            Phase::Exact { k, n } => C64::from_polar(1.0, std::f64::consts::TAU * (k as f64) / (n as f64)),
            Phase::Float { re, im } => C64::new(re, im),
        }
    }

    pub fn modulus_error(&self) -> f64 {
        match self {
            Phase::Exact { .. } => 0.0,
            Phase::Float { re, im } => ((re * re + im * im).sqrt() - 1.0).abs(),
        }
    }

    pub fn conj(&self) -> Phase {
        match *self {
            Phase::Exact { k, n } => Phase::root(-(k as i64), n),
            Phase::Float { re, im } => Phase::Float { re, im: -im },
        }
    }

    pub fn conj_if(&self, flag: bool) -> Phase {
        if flag {
            self.conj()
        } else {
            *self
        }
    }

    pub fn inv(&self) -> Phase {
        match *self {
            Phase::Exact { .. } => self.conj(),
            Phase::Float { .. } => Phase::from_complex(C64::new(1.0, 0.0) / self.to_complex()),
        }
    }

    /// Exponent of this phase on the `n`-th root lattice, if it lies within
    /// `tol` of it.
    pub fn snap(&self, n: u64, tol: f64) -> Option<u64> {
        match self.reduced() {
            Phase::Exact { k, n: m } => {
                if n.is_multiple_of(m) {
                    Some(k * (n / m))
                } else {
                    None
                }
            }
            Phase::Float { .. } => {
                let z = self.to_complex();
                if n == 0 || (z.norm() - 1.0).abs() > tol {
                    return None;
                }
                let turns = z.arg() / std::f64::consts::TAU * n as f64;
                let k = turns.round();
                let snapped = Phase::root(k as i64, n);
                if (snapped.to_complex() - z).norm() <= tol {
                    Some((k as i64).rem_euclid(n as i64) as u64)
                } else {
                    None
                }
            }
        }
    }

    pub fn snapped(&self, n: u64, tol: f64) -> Option<Phase> {
        self.snap(n, tol).map(|k| Phase::root(k as i64, n))
    }

    pub fn approx_eq(&self, other: &Phase, tol: f64) -> bool {
        match (self, other) {
            (Phase::Exact { k: a, n: m }, Phase::Exact { k: b, n }) => a * n == b * m,
            _ => (self.to_complex() - other.to_complex()).norm() <= tol,
        }
    }

    pub fn is_one(&self, tol: f64) -> bool {
        self.approx_eq(&Phase::ONE, tol)
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        match (self, rhs) {
            (Phase::Exact { k: a, n: m }, Phase::Exact { k: b, n }) => {
                let l = m.lcm(&n);
                Phase::root(((a * (l / m) + b * (l / n)) % l) as i64, l)
            }
            (x, y) => Phase::from_complex(x.to_complex() * y.to_complex()),
        }
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Phase) -> bool {
        self.approx_eq(other, UNIT_TOL)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Exact { k: 0, .. } => write!(f, "1"),
            Phase::Exact { k: 1, n: 2 } => write!(f, "-1"),
            Phase::Exact { k, n } => write!(f, "e(2πi·{k}/{n})"),
            Phase::Float { re, im } => write!(f, "{re:.12}{im:+.12}i"),
        }
    }
}
