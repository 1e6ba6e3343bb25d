//! Normal-form multiplication against a letter-by-letter permutation
//! realization.
//!
//! The point `(v1, v2, l)` stands for `a^v1 b^v2 x^l`. Right multiplication
//! by a single letter only needs the relation `x a x⁻¹ = a^(s⁻¹)`, so a
//! product `g h` is computed by starting at the point of `g` and applying the
//! letters of `h`'s normal form one at a time.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twisted_core::constructions::{build, GroupSpec};
use twisted_core::group::Group;
use twisted_core::{inv_mod, pow_mod};

struct Letters {
    q1: u64,
    q2: u64,
    m: u64,
    /// `s^(-l)` modulo `q1` and `q2`, by `l`.
    twist: Vec<(u64, u64)>,
}

impl Letters {
    fn new(g: &Group) -> Letters {
        let d = g.as_semidirect().unwrap().descriptor();
        let (q1, q2, m, s) = (d.q1 as u64, d.q2 as u64, d.m as u64, d.s as u64);
        let inv = |q: u64| if q == 1 { 0 } else { inv_mod(s % q, q).unwrap() };
        let (i1, i2) = (inv(q1), inv(q2));
        let twist = (0..m)
            .map(|l| (pow_mod(i1, l, q1.max(1)), pow_mod(i2, l, q2.max(1))))
            .collect();
        Letters { q1, q2, m, twist }
    }

    fn times(&self, mut p: (u64, u64, u64), h: [u32; 3]) -> (u64, u64, u64) {
        for _ in 0..h[0] {
            p.0 = (p.0 + self.twist[p.2 as usize].0) % self.q1;
        }
        for _ in 0..h[1] {
            p.1 = (p.1 + self.twist[p.2 as usize].1) % self.q2;
        }
        for _ in 0..h[2] {
            p.2 = (p.2 + 1) % self.m;
        }
        p
    }
}

fn agrees(g: &Group, letters: &Letters, x: u32, y: u32) -> bool {
    let sd = g.as_semidirect().unwrap();
    let [i, j, k] = sd.coords(x);
    let p = letters.times((i as u64, j as u64, k as u64), sd.coords(y));
    let [pi, pj, pk] = sd.coords(g.mul(x, y));
    p == (pi as u64, pj as u64, pk as u64)
}

fn group(spec: &str) -> Group {
    build(&spec.parse::<GroupSpec>().unwrap()).unwrap().group
}

const SMALL: [&str; 7] = [
    "theorem_a:n=2,p=3",
    "two_group:n=2",
    "two_group:n=3",
    "dihedral:16",
    "dihedral:32",
    "modular:3",
    "modular:5",
];

#[test]
fn exhaustive_on_small_groups() {
    for spec in SMALL {
        let g = group(spec);
        let letters = Letters::new(&g);
        for x in g.elements() {
            for y in g.elements() {
                assert!(agrees(&g, &letters, x, y), "{spec}: #{x} * #{y}");
            }
        }
    }
}

#[test]
fn sampled_on_large_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [
        "theorem_a:n=2,p=5",
        "theorem_a:n=3,p=3",
        "theorem_a:n=2,p=7",
        "two_group:n=5",
    ] {
        let g = group(spec);
        let letters = Letters::new(&g);
        let n = g.order() as u32;
        for _ in 0..20_000 {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            assert!(agrees(&g, &letters, x, y), "{spec}: #{x} * #{y}");
        }
    }
}

proptest! {
    #[test]
    fn inverses_and_powers(spec in prop::sample::select(SMALL.to_vec()), seed in any::<u64>()) {
        let g = group(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = rng.gen_range(0..g.order() as u32);
        let e = rng.gen_range(-40i64..40);
        prop_assert_eq!(g.mul(x, g.inv(x)), 0);
        let mut acc = 0;
        for _ in 0..e.unsigned_abs() {
            acc = g.mul(acc, if e >= 0 { x } else { g.inv(x) });
        }
        prop_assert_eq!(g.pow(x, e), acc);
        prop_assert_eq!(g.pow(x, g.element_order(x) as i64), 0);
    }

    #[test]
    fn associativity(spec in prop::sample::select(SMALL.to_vec()), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let g = group(spec);
        let n = g.order() as u32;
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
    }
}
