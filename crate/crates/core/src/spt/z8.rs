//! Indices for `G = ℤ₂` acting by time reversal, written `[κ; ε, ξ]` with
//! `ε = 𝔮(1)` and `ξ = υ(1,1) = ±1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::index::SPTIndex;
use super::SptError;
use crate::cocycle::TwistedCocycle;
use crate::group::{FiniteGroup, Z2Hom};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Z8Element {
    pub kappa: u8,
    pub eps: u8,
    /// `true` for `ξ = −`.
    pub minus: bool,
}

impl Z8Element {
    pub const IDENTITY: Z8Element = Z8Element { kappa: 0, eps: 0, minus: false };
    pub const GENERATOR: Z8Element = Z8Element { kappa: 1, eps: 0, minus: false };

    pub fn new(kappa: u8, eps: u8, minus: bool) -> Self {
        Self { kappa: kappa & 1, eps: eps & 1, minus }
    }

    /// All eight elements in `(κ, ε, ξ)` lexicographic order.
    pub fn all() -> Vec<Z8Element> {
        let mut out = Vec::with_capacity(8);
        for kappa in 0..2 {
            for eps in 0..2 {
                for minus in [false, true] {
                    out.push(Z8Element::new(kappa, eps, minus));
                }
            }
        }
        out
    }

    /// The smallest `k ≥ 0` with `GENERATOR^k = self`.
    pub fn generator_power(&self) -> usize {
        let mut x = Z8Element::IDENTITY;
        for k in 0..8 {
            if x == *self {
                return k;
            }
            x = z8_compose(&x, &Z8Element::GENERATOR);
        }
        unreachable!("the generator has order 8")
    }
}

impl fmt::Display for Z8Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{},{}]", self.kappa, self.eps, if self.minus { '-' } else { '+' })
    }
}

/// The composition rules of the time-reversal group law.
pub fn z8_compose(a: &Z8Element, b: &Z8Element) -> Z8Element {
    let (e1, e2) = (a.eps, b.eps);
    let xi = a.minus ^ b.minus;
    match (a.kappa, b.kappa) {
        (0, 0) => Z8Element::new(0, e1 ^ e2, xi ^ (e1 & e2 == 1)),
        (0, 1) => Z8Element::new(1, e1 ^ e2, xi ^ ((e1 ^ (e1 & e2)) == 1)),
        (1, 0) => Z8Element::new(1, e1 ^ e2, xi ^ ((e2 ^ (e1 & e2)) == 1)),
        _ => Z8Element::new(0, e1 ^ e2 ^ 1, xi ^ (e1 & e2 == 1)),
    }
}

fn time_reversal_setting(group: &FiniteGroup, p: &Z2Hom) -> bool {
    group.order() == 2 && p.values() == [0, 1]
}

pub fn z8_encode(index: &SPTIndex) -> Result<Z8Element, SptError> {
    if !time_reversal_setting(index.group(), index.twist()) {
        return Err(SptError::NotTimeReversalShape);
    }
    let one = 1 - index.group().identity();
    let minus = match index.cls.value(one, one).snap(2, crate::cocycle::DEFAULT_SNAP_TOL) {
        Some(k) => k == 1,
        None => return Err(SptError::NotTimeReversalShape),
    };
    Ok(Z8Element::new(index.kappa, index.q.at(one), minus))
}

/// The index on `ℤ₂ = {0, 1}` with `𝔭 = id` and `υ(1,1) = ξ`.
pub fn z8_decode(e: &Z8Element) -> SPTIndex {
    let group = FiniteGroup::cyclic(2);
    let p = Z2Hom::z2_identity();
    let q = Z2Hom::new(&group, vec![0, e.eps]).expect("valid hom on ℤ₂");
    let values = vec![vec![Phase::ONE, Phase::ONE], vec![Phase::ONE, Phase::sign(e.minus)]];
    let cls = TwistedCocycle::new(&group, &p, values).expect("±1 at (1,1) is a twisted cocycle");
    SPTIndex { kappa: e.kappa, q, cls }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spt::stack_index;

    #[test]
    fn generator_powers() {
        let expected = ["[0;0,+]", "[1;0,+]", "[0;1,+]", "[1;1,-]", "[0;0,-]", "[1;0,-]", "[0;1,-]", "[1;1,+]"];
        let mut x = Z8Element::IDENTITY;
        for (k, want) in expected.iter().enumerate() {
            assert_eq!(x.to_string(), *want, "power {k}");
            x = z8_compose(&x, &Z8Element::GENERATOR);
        }
        assert_eq!(x, Z8Element::IDENTITY);
    }

    #[test]
    fn compose_agrees_with_stacking_law() {
        for a in Z8Element::all() {
            for b in Z8Element::all() {
                let via_law = z8_encode(&stack_index(&z8_decode(&a), &z8_decode(&b)).unwrap()).unwrap();
                assert_eq!(via_law, z8_compose(&a, &b), "{a} * {b}");
            }
        }
    }

    #[test]
    fn wrong_shape() {
        let g = FiniteGroup::cyclic(2);
        let idx = SPTIndex::trivial(&g, &Z2Hom::trivial(&g));
        assert_eq!(z8_encode(&idx).unwrap_err(), SptError::NotTimeReversalShape);
    }
}
