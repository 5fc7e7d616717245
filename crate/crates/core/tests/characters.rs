use feq_core::characters::{character_group, euler_phi};
use feq_core::{c64, Complex};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn gauss_sums_of_primitive_characters() {
    for q in 1..=50u64 {
        for chi in character_group(q).unwrap() {
            if !chi.is_primitive() {
                continue;
            }
            let t = chi.gauss_sum();
            assert!((t.norm() - (q as f64).sqrt()).abs() < 1e-10, "q = {q}: |tau| = {}", t.norm());
        }
    }
}

#[test]
fn orthogonality() {
    for q in 1..=30u64 {
        let group = character_group(q).unwrap();
        let phi = euler_phi(q) as f64;
        assert_eq!(group.len() as f64, phi);
        for (i, a) in group.iter().enumerate() {
            for (j, b) in group.iter().enumerate() {
                let s = (1..=q as i64).fold(c64(0.0, 0.0), |acc, n| acc + a.value(n) * b.value(n).conj());
                let expect = if i == j { phi } else { 0.0 };
                assert!((s - expect).norm() < 1e-12, "q = {q}, ({i}, {j}): {s}");
            }
        }
        // column relation
        for n in 1..=q as i64 {
            let s = group.iter().fold(c64(0.0, 0.0), |acc, c| acc + c.value(n));
            let expect = if n == 1 || (q == 1) { phi } else { 0.0 };
            assert!((s - expect).norm() < 1e-12, "q = {q}, n = {n}: {s}");
        }
    }
}

#[test]
fn brute_force_character_axioms() {
    for q in 1..=100u64 {
        let group = character_group(q).unwrap();
        let qi = q as i64;
        for chi in &group {
            let vals: Vec<Complex> = (0..qi).map(|n| chi.value(n)).collect();
            for n in 0..qi {
                let v = vals[n as usize];
                if gcd(n as u64, q) == 1 {
                    assert!((v.norm() - 1.0).abs() < 1e-12);
                    let order = chi.order() as i32;
                    assert!((v.powi(order) - 1.0).norm() < 1e-10);
                } else {
                    assert_eq!(v, c64(0.0, 0.0));
                }
                assert_eq!(chi.value(n + 3 * qi), v);
                assert_eq!(chi.value(n - qi), v);
            }
            for m in 0..qi.min(40) {
                for n in 0..qi.min(40) {
                    let lhs = chi.value(m * n);
                    let rhs = vals[m as usize] * vals[n as usize];
                    assert!((lhs - rhs).norm() < 1e-12, "q = {q}: chi({m} {n})");
                }
            }
            assert_eq!(chi.conjugate().conjugate(), *chi);
            for n in 0..qi {
                assert!((chi.conjugate().value(n) - vals[n as usize].conj()).norm() < 1e-15);
            }
        }
        // the characters are pairwise distinct
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                assert!((1..=qi).any(|n| (a.value(n) - b.value(n)).norm() > 1e-9), "q = {q}");
            }
        }
    }
}
