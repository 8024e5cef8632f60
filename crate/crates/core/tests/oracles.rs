mod common {
    pub mod oracle;
}

use std::collections::BTreeSet;

use common::oracle;
use hyperjet::classify::{bloom_graham, BloomGraham};
use hyperjet::curve::{compose, CurveJet, TPoly};
use hyperjet::expr::parse;
use hyperjet::newton::{hull, SupportSet};
use hyperjet::{GaussianRational, VanishingOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_support(rng: &mut ChaCha8Rng) -> (usize, Vec<Vec<u32>>) {
    let n = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=12);
    let mut pts = BTreeSet::new();
    while pts.len() < k {
        let p: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
        if p.iter().any(|&x| x > 0) {
            pts.insert(p);
        }
        if n == 1 && pts.len() >= 6 {
            break;
        }
    }
    (n, pts.into_iter().collect())
}

#[test]
fn hull_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let (n, pts) = random_support(&mut rng);
        let p = hull(&SupportSet::new(n, pts.clone())).unwrap();
        let (facets, vertices) = oracle::hull(n, &pts);
        let got: BTreeSet<(Vec<i64>, i64)> = p.facets.iter().map(|f| (f.normal.clone(), f.level)).collect();
        assert_eq!(got, facets, "facets of {pts:?}");
        let got: BTreeSet<Vec<u32>> = p.vertices.iter().cloned().collect();
        assert_eq!(got, vertices, "vertices of {pts:?}");
    }
}

#[test]
fn hull_oracle_known_cases() {
    // (3, 2) sits on the segment from (6, 0) to (0, 4)
    let (f, v) = oracle::hull(2, &[vec![6, 0], vec![3, 2], vec![0, 4]]);
    assert_eq!(v.len(), 2);
    assert!(f.contains(&(vec![2, 3], 12)));
    assert!(f.contains(&(vec![1, 0], 0)) && f.contains(&(vec![0, 1], 0)));
    assert_eq!(f.len(), 3);
    let (f, v) = oracle::hull(2, &[vec![6, 0], vec![2, 1], vec![0, 4]]);
    assert_eq!(v.len(), 3);
    assert!(f.contains(&(vec![1, 4], 6)) && f.contains(&(vec![3, 2], 8)));
    assert_eq!(f.len(), 4);
}

fn random_tpoly(rng: &mut ChaCha8Rng, max_deg: u32) -> TPoly {
    let mut p = TPoly::zero();
    for _ in 0..rng.gen_range(0..=2) {
        p.add_term(
            rng.gen_range(1..=max_deg),
            GaussianRational::from_ints(rng.gen_range(-2..=2), rng.gen_range(-1..=1)),
        );
    }
    p
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> String {
    let var = |rng: &mut ChaCha8Rng| format!("z{}", rng.gen_range(1..=n));
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let a = format!("{}^{}", var(rng), rng.gen_range(1..=3));
        let b = format!("{}^{}", var(rng), rng.gen_range(1..=3));
        let c = ["1", "2", "(1+i)", "(2-i)", "1/2"][rng.gen_range(0..5)];
        terms.push(match rng.gen_range(0..3) {
            0 => format!("2*Re({c}*{a}*conj({b}))"),
            1 => format!("|{a} + {c}*{b}|^2"),
            _ => format!("2*Re({c}*{a})"),
        });
    }
    terms.join(" + ")
}

#[test]
fn compose_matches_naive_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rng.gen_range(1..=3);
        let df = parse(&format!("# n={n}\n{}", random_hermitian(&mut rng, n))).unwrap();
        let comps: Vec<TPoly> = (0..n).map(|_| random_tpoly(&mut rng, 4)).collect();
        let Ok(gamma) = CurveJet::new(comps, None) else {
            continue;
        };
        let fast = compose(&df.jet, &gamma).unwrap();
        assert_eq!(fast.validity, None);
        assert_eq!(fast.terms, oracle::compose(&df.jet, &gamma), "{} along {gamma}", df.to_text());
    }
}

const GRID: [&str; 4] = ["0", "1", "(-1)", "2"];

/// Largest vanishing order of `F − 2Re P` over every `P` with grid
/// coefficients on the given holomorphic monomials.
fn brute_bloom_graham(f: &str, n: usize, monos: &[String]) -> VanishingOrder {
    let mut best: Option<VanishingOrder> = None;
    let total = GRID.len().pow(monos.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut p = Vec::new();
        for m in monos {
            p.push(format!("{}*{m}", GRID[c % GRID.len()]));
            c /= GRID.len();
        }
        let df = parse(&format!("# n={n}\n{f} - 2*Re({})", p.join(" + "))).unwrap();
        let ord = df.jet.vanishing_order();
        let better = match (&best, &ord) {
            (None, _) => true,
            (Some(VanishingOrder::Finite(a)), VanishingOrder::Finite(b)) => b > a,
            (Some(VanishingOrder::Finite(_)), VanishingOrder::Infinite { .. }) => true,
            _ => false,
        };
        if better {
            best = Some(ord);
        }
    }
    best.expect("at least one candidate")
}

#[test]
fn bloom_graham_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..12 {
        let n = rng.gen_range(1..=2);
        let monos: Vec<String> = if n == 1 {
            (2..=5).map(|k| format!("z1^{k}")).collect()
        } else {
            vec!["z1^2".into(), "z1*z2".into(), "z2^2".into(), "z2^3".into()]
        };
        let mut pure = Vec::new();
        for m in &monos {
            let c = GRID[rng.gen_range(0..GRID.len())];
            pure.push(format!("{c}*{m}"));
        }
        let mixed = match rng.gen_range(0..4) {
            0 => String::new(),
            1 => " + |z1|^4".into(),
            2 => format!(" + |z{}|^2", n),
            _ => " + |z1|^2*|z1|^4".into(),
        };
        let f = format!("2*Re({}){mixed}", pure.join(" + "));
        let expect = brute_bloom_graham(&f, n, &monos);
        let got = bloom_graham(&parse(&format!("# n={n}\n2*Re(w) + {f}")).unwrap(), 100).unwrap();
        match expect {
            VanishingOrder::Finite(m) => assert_eq!(got, BloomGraham::Finite(m), "{f}"),
            VanishingOrder::Infinite { .. } => assert_eq!(got, BloomGraham::Infinite, "{f}"),
        }
    }
}
