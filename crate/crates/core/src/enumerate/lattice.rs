//! Primitive lattice points inside diagonal ellipsoids `sum c_i y_i^2 <= T`.

use std::sync::OnceLock;

use num_integer::Integer;

/// Sign convention imposed on the first coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lead {
    /// First nonzero coordinate positive.
    Free,
    /// `y_0 >= 1`.
    Positive,
    /// `y_0 = 0`, first nonzero of the rest positive.
    Zero,
}

const SIEVE_LIMIT: usize = 1 << 20;

fn smallest_prime_factors() -> &'static [u32] {
    static SPF: OnceLock<Vec<u32>> = OnceLock::new();
    SPF.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE_LIMIT + 1];
        for i in 2..=SIEVE_LIMIT {
            if spf[i] == 0 {
                let mut j = i;
                while j <= SIEVE_LIMIT {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

/// Distinct prime factors.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    if n <= SIEVE_LIMIT as u128 {
        let spf = smallest_prime_factors();
        while n > 1 {
            let p = spf[n as usize] as u128;
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        return out;
    }
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
            if n <= SIEVE_LIMIT as u128 {
                let mut rest = prime_factors(n);
                out.append(&mut rest);
                return out;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Number of `y` in `[-m, m]` with `gcd(g, y) = 1`, by inclusion-exclusion over the primes of `g`.
pub fn coprime_in_range(g: u128, m: u128) -> u128 {
    if g == 1 {
        return 2 * m + 1;
    }
    let ps = prime_factors(g);
    let mut total: i128 = 0;
    let k = ps.len();
    for mask in 0u32..(1 << k) {
        let mut d = 1u128;
        for (i, p) in ps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
                if d > m {
                    break;
                }
            }
        }
        let term = 2 * (m / d) as i128 + 1;
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as u128
}

/// Counts primitive `y` with `sum c_i y_i^2 <= bound` under the sign convention `lead`.
pub fn count_primitive(c: &[u128], bound: u128, lead: Lead) -> u128 {
    assert!(!c.is_empty());
    let m0 = (bound / c[0]).isqrt();
    if c.len() == 1 {
        return match lead {
            Lead::Zero => 0,
            _ => u128::from(m0 >= 1),
        };
    }
    match lead {
        Lead::Zero => count_rec(c, 1, bound, 0),
        Lead::Free => count_rec(c, 0, bound, 0),
        Lead::Positive => {
            let mut total = 0;
            for y in 1..=m0 {
                total += count_rec(c, 1, bound - c[0] * y * y, y);
            }
            total
        }
    }
}

/// `g` is the gcd of the coordinates fixed so far, zero while they are all zero.
fn count_rec(c: &[u128], i: usize, rem: u128, g: u128) -> u128 {
    let m = (rem / c[i]).isqrt();
    if i + 1 == c.len() {
        return if g == 0 { u128::from(m >= 1) } else { coprime_in_range(g, m) };
    }
    let mut total = 0;
    if g == 0 {
        total += count_rec(c, i + 1, rem, 0);
        for y in 1..=m {
            total += count_rec(c, i + 1, rem - c[i] * y * y, y);
        }
    } else {
        // y and -y give the same gcd and remainder
        total += count_rec(c, i + 1, rem, g);
        for y in 1..=m {
            total += 2 * count_rec(c, i + 1, rem - c[i] * y * y, g.gcd(&y));
        }
    }
    total
}

/// Calls `visit` on every primitive point counted by [`count_primitive`], in lexicographic order.
pub fn for_each_primitive(c: &[u128], bound: u128, lead: Lead, visit: &mut dyn FnMut(&[i128])) {
    let mut y = vec![0i128; c.len()];
    let m0 = (bound / c[0]).isqrt() as i128;
    let range: Vec<i128> = match lead {
        Lead::Zero => vec![0],
        Lead::Positive => (1..=m0).collect(),
        Lead::Free => (0..=m0).collect(),
    };
    for y0 in range {
        y[0] = y0;
        let rem = bound - c[0] * (y0 * y0) as u128;
        visit_rec(c, 1, rem, y0.unsigned_abs(), &mut y, visit);
    }
}

fn visit_rec(c: &[u128], i: usize, rem: u128, g: u128, y: &mut Vec<i128>, visit: &mut dyn FnMut(&[i128])) {
    if i == c.len() {
        if g == 1 {
            visit(y);
        }
        return;
    }
    let m = (rem / c[i]).isqrt() as i128;
    let lo = if g == 0 { 0 } else { -m };
    for v in lo..=m {
        y[i] = v;
        visit_rec(c, i + 1, rem - c[i] * (v * v) as u128, g.gcd(&v.unsigned_abs()), y, visit);
    }
    y[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(c: &[u128], bound: u128, lead: Lead) -> u128 {
        let mut n = 0;
        for_each_primitive(c, bound, lead, &mut |_| n += 1);
        n
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(1), Vec::<u128>::new());
        let big = 1_000_003u128 * 999_983 * 4;
        assert_eq!(prime_factors(big), vec![2, 999_983, 1_000_003]);
    }

    #[test]
    fn coprime_counts() {
        for g in 1..40u128 {
            for m in 0..30u128 {
                let direct = (-(m as i128)..=m as i128).filter(|y| g.gcd(&y.unsigned_abs()) == 1).count() as u128;
                assert_eq!(coprime_in_range(g, m), direct, "g={g} m={m}");
            }
        }
    }

    #[test]
    fn counting_matches_visiting() {
        for c in [vec![1u128, 1], vec![1, 1, 1], vec![3, 1, 2], vec![5, 1], vec![1, 4, 9, 1]] {
            for bound in [0u128, 1, 2, 7, 30, 101] {
                for lead in [Lead::Free, Lead::Positive, Lead::Zero] {
                    assert_eq!(count_primitive(&c, bound, lead), naive(&c, bound, lead), "{c:?} {bound} {lead:?}");
                }
            }
        }
    }

    #[test]
    fn projective_line_small() {
        // [1:0] [0:1] [1:1] [1:-1] [1:2] [1:-2] [2:1] [2:-1]
        assert_eq!(count_primitive(&[1, 1], 5, Lead::Free), 8);
    }
}
