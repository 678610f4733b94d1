//! Small integer helpers shared by the field and search code.

pub use num_integer::{gcd, lcm};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Splits a prime power `q` into `(p, k)` with `q = p^k`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn lcm_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(1, lcm)
}

pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// p-adic valuation of a nonzero `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}
