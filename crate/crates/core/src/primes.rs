//! Small-prime utilities (trial division and sieving at desk scale).

/// Deterministic primality by trial division; adequate for the `u64`
/// desk-scale inputs this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(547));
        assert!(is_prime(691));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(49));
        assert!(!is_prime(541 * 547));
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieved = primes_up_to(500);
        let checked: Vec<u64> = (0..=500).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, checked);
    }
}
