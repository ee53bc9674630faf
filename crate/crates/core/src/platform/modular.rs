//! Small-modulus integer arithmetic.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat; `None` for zero.
pub fn inv_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `g` modulo the prime `p`.
pub fn multiplicative_order(g: u64, p: u64) -> u64 {
    let mut order = p - 1;
    for q in prime_factors(p - 1) {
        while order.is_multiple_of(q) && pow_mod(g, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_matches_naive_loop() {
        for p in [5u64, 7, 11, 23, 101] {
            for g in 1..p {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = x * g % p;
                    k += 1;
                }
                assert_eq!(multiplicative_order(g, p), k, "g={g} p={p}");
            }
        }
    }

    #[test]
    fn primes() {
        assert!(is_prime(1009));
        assert!(!is_prime(1011));
        assert_eq!(prime_factors(1008), vec![2, 3, 7]);
        assert_eq!(inv_mod_prime(5, 23), Some(14));
    }
}
