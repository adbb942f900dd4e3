//! Prime arithmetic: a bitset sieve, the von Mangoldt function, and the
//! weighted prime-power sums the explicit formula and the transform
//! identity consume.

use super::AnalyticError;

/// Eratosthenes over a u64 bitset; bit n set means n is prime.
pub struct PrimeSieve {
    limit: u64,
    bits: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let words = (limit as usize / 64) + 1;
        let mut bits = vec![!0u64; words];
        let clear = |bits: &mut Vec<u64>, n: u64| bits[(n / 64) as usize] &= !(1 << (n % 64));
        clear(&mut bits, 0);
        if limit >= 1 {
            clear(&mut bits, 1);
        }
        let mut p = 2u64;
        while p * p <= limit {
            if bits[(p / 64) as usize] >> (p % 64) & 1 == 1 {
                let mut q = p * p;
                while q <= limit {
                    clear(&mut bits, q);
                    q += p;
                }
            }
            p += 1;
        }
        PrimeSieve { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && (self.bits[(n / 64) as usize] >> (n % 64)) & 1 == 1
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(move |&n| self.is_prime(n))
    }

    /// sum over prime powers p^l < u (strict) of ln(p) p^{-ls}, grouped by
    /// prime so each ln is taken once.  Finite sum, any real s.
    pub fn lambda_power_sum(&self, u: f64, s: f64) -> Result<f64, AnalyticError> {
        if u > self.limit as f64 + 1.0 {
            return Err(AnalyticError::Domain(format!(
                "cutoff {u} exceeds sieve limit {}",
                self.limit
            )));
        }
        let mut total = 0.0;
        for p in self.primes() {
            if p as f64 >= u {
                break;
            }
            let base = (p as f64).powf(-s);
            let mut term = base;
            let mut geom = 0.0;
            let mut power = p;
            loop {
                geom += term;
                match power.checked_mul(p) {
                    Some(next) if (next as f64) < u => {
                        power = next;
                        term *= base;
                    }
                    _ => break,
                }
            }
            total += (p as f64).ln() * geom;
        }
        Ok(total)
    }

    /// -zeta'/zeta(s) approximated by the prime-power sum up to the sieve
    /// limit.  Needs s > 1 for the truncation to mean anything.
    pub fn minus_zeta_log_deriv(&self, s: f64) -> Result<f64, AnalyticError> {
        if !(s > 1.0) {
            return Err(AnalyticError::Domain(format!(
                "the prime-power sum for zeta'/zeta needs s > 1, got {s}"
            )));
        }
        self.lambda_power_sum(self.limit as f64 + 0.5, s)
    }
}

/// If n = p^l returns (p, l); otherwise None.  Trial division, intended for
/// the small arguments the explicit formula evaluates.
pub fn prime_power_split(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut l = 0u32;
            while m % p == 0 {
                m /= p;
                l += 1;
            }
            return if m == 1 { Some((p, l)) } else { None };
        }
        p += 1;
    }
    Some((n, 1))
}

/// Lambda(n): ln p when n is a power of the prime p, else 0.
pub fn von_mangoldt(n: u64) -> f64 {
    match prime_power_split(n) {
        Some((p, _)) => (p as f64).ln(),
        None => 0.0,
    }
}

/// Chebyshev sum over n < u (strict): sum Lambda(n).
pub fn chebyshev_psi(u: f64) -> f64 {
    if u <= 2.0 {
        return 0.0;
    }
    let top = (u.ceil() as u64).saturating_sub(1).min(u as u64);
    let mut total = 0.0;
    for n in 2..=top {
        if (n as f64) < u {
            total += von_mangoldt(n);
        }
    }
    total
}

/// Weighted sum over n < u (strict): sum n * Lambda(n).
pub fn phi_weighted(u: f64) -> f64 {
    if u <= 2.0 {
        return 0.0;
    }
    let top = (u.ceil() as u64).saturating_sub(1).min(u as u64);
    let mut total = 0.0;
    for n in 2..=top {
        if (n as f64) < u {
            total += n as f64 * von_mangoldt(n);
        }
    }
    total
}

/// The prime power within `tol` of u, if any.  Evaluation points of the
/// exact counting distribution must stay clear of its jumps.
pub fn near_prime_power(u: f64, tol: f64) -> Option<u64> {
    if u < 2.0 - tol {
        return None;
    }
    for cand in [u.floor() as u64, u.round() as u64, u.ceil() as u64] {
        if cand >= 2 && (u - cand as f64).abs() <= tol && prime_power_split(cand).is_some() {
            return Some(cand);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_trial_division() {
        let sieve = PrimeSieve::new(10_000);
        for n in 0..=10_000u64 {
            assert_eq!(
                sieve.is_prime(n),
                n >= 2 && prime_power_split(n) == Some((n, 1)),
                "disagree at {n}"
            );
        }
        assert_eq!(sieve.primes().count(), 1229);
    }

    #[test]
    fn von_mangoldt_values() {
        assert!((von_mangoldt(8) - 2f64.ln()).abs() < 1e-15);
        assert!((von_mangoldt(7) - 7f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(6), 0.0);
        assert_eq!(von_mangoldt(1), 0.0);
        assert!((von_mangoldt(243) - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn weighted_sums() {
        // n < 10: 2,3,4,5,7,8,9 contribute
        // 14 ln2 + 12 ln3 + 5 ln5 + 7 ln7
        let expect =
            14.0 * 2f64.ln() + 12.0 * 3f64.ln() + 5.0 * 5f64.ln() + 7.0 * 7f64.ln();
        assert!((phi_weighted(10.0) - expect).abs() < 1e-9);
        assert!((phi_weighted(10.0) - 44.555968).abs() < 1e-5);
        assert_eq!(phi_weighted(1.5), 0.0);
        assert_eq!(phi_weighted(2.0), 0.0);
        // strictness: u = 4.5 includes 2, 3, 4 only
        let expect45 = 6.0 * 2f64.ln() + 3.0 * 3f64.ln();
        assert!((phi_weighted(4.5) - expect45).abs() < 1e-12);
        assert!((phi_weighted(4.5) - 7.4547196).abs() < 1e-6);
        // psi(10): prime powers below 10 are 2,4,8 / 3,9 / 5 / 7
        let psi = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((chebyshev_psi(10.0) - psi).abs() < 1e-12);
    }

    #[test]
    fn log_deriv_sum_matches_lambda_sum() {
        let sieve = PrimeSieve::new(50_000);
        let s = 2.0;
        let direct: f64 = (2..50_000u64)
            .map(|n| von_mangoldt(n) * (n as f64).powf(-s))
            .sum();
        let grouped = sieve.minus_zeta_log_deriv(s).unwrap();
        assert!((direct - grouped).abs() < 1e-10);
        // known value: -zeta'/zeta(2) = 0.5699605..., tail beyond 5e4 is tiny
        assert!((grouped - 0.569960993).abs() < 1e-4);
        assert!(sieve.minus_zeta_log_deriv(1.0).is_err());
    }

    #[test]
    fn prime_power_proximity() {
        assert_eq!(near_prime_power(8.0 + 4e-10, 1e-9), Some(8));
        assert_eq!(near_prime_power(8.0 - 4e-10, 1e-9), Some(8));
        assert_eq!(near_prime_power(8.5, 1e-9), None);
        assert_eq!(near_prime_power(6.0, 1e-9), None);
        assert_eq!(near_prime_power(1.0, 1e-9), None);
        assert_eq!(near_prime_power(9.0, 1e-9), Some(9));
    }
}
