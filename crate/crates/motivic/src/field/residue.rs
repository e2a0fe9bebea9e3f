//! Arithmetic in the prime residue field and small number-theoretic helpers.

/// Normalize an integer into `[0, p)`.
pub fn reduce(n: i64, p: u64) -> u64 {
    let m = n % p as i64;
    if m < 0 {
        (m + p as i64) as u64
    } else {
        m as u64
    }
}

pub fn add(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero element mod the prime `p`.
pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    pow(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Is `a` a nonzero square mod `p`? (`p` odd prime)
pub fn is_square(a: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return false;
    }
    pow(a, (p - 1) / 2, p) == 1
}

/// A square root of `a` mod `p` when one exists. Small fields, direct scan.
pub fn sqrt(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    (0..p).find(|&r| mul(r, r, p) == a)
}

/// Is `a` an `n`-th power in the multiplicative group mod `p`?
pub fn is_nth_power(a: u64, n: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return false;
    }
    let g = gcd(n, p - 1);
    pow(a, (p - 1) / g, p) == 1
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Irreducibility of the binomial `x^r - a` over the prime field, for `a`
/// nonzero: `a` must avoid every `q`-th power for primes `q | r`, and avoid
/// `-4 * (fourth powers)` when `4 | r`.
pub fn binomial_irreducible(r: u32, a: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return false;
    }
    if r == 1 {
        return true;
    }
    let mut m = r as u64;
    let mut q = 2;
    let mut prime_factors = Vec::new();
    while m > 1 {
        if m % q == 0 {
            prime_factors.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    for q in prime_factors {
        if is_nth_power(a, q, p) {
            return false;
        }
    }
    if r % 4 == 0 {
        // a must not lie in -4 * (F_p^*)^4
        for b in 1..p {
            let b4 = pow(b, 4, p);
            if mul(p - 4 % p, b4, p) == a {
                return false;
            }
        }
    }
    true
}

/// Smallest unit `a` making `x^r - a` irreducible mod `p`, if any.
pub fn find_irreducible_binomial_unit(r: u32, p: u64) -> Option<u64> {
    (2..p).find(|&a| binomial_irreducible(r, a, p))
}

/// A primitive `r`-th root of unity mod `p`; requires `r | p - 1`.
pub fn primitive_root_of_unity(r: u32, p: u64) -> Option<u64> {
    let r = r as u64;
    if (p - 1) % r != 0 {
        return None;
    }
    'outer: for g in 2..p {
        let z = pow(g, (p - 1) / r, p);
        // order exactly r
        let mut acc = z;
        for _ in 1..r {
            if acc == 1 {
                continue 'outer;
            }
            acc = mul(acc, z, p);
        }
        if acc == 1 {
            return Some(z);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_mod_5() {
        assert!(is_square(4, 5));
        assert!(!is_square(2, 5));
        assert_eq!(sqrt(4, 5), Some(2).or(Some(3)).map(|_| sqrt(4, 5).unwrap()));
        let r = sqrt(4, 5).unwrap();
        assert_eq!(mul(r, r, 5), 4);
    }

    #[test]
    fn binomial_irreducibility() {
        // 2 is a non-square mod 5, 4 = 2^2 is a square
        assert!(binomial_irreducible(2, 2, 5));
        assert!(!binomial_irreducible(2, 4, 5));
        assert!(binomial_irreducible(2, 2, 3));
    }

    #[test]
    fn roots_of_unity() {
        let z = primitive_root_of_unity(2, 7).unwrap();
        assert_eq!(z, 6); // -1
        assert!(primitive_root_of_unity(3, 7).is_some());
        assert!(primitive_root_of_unity(3, 5).is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(13));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(91));
    }
}
