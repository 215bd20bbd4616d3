//! The D-dimensional Coulomb-Sturmian basis and the Coulomb plus polynomial
//! potential it is used with.
//!
//! The radial functions are
//!
//! ```text
//! <r|n> = sqrt(n! / Γ(n+2L+2)) e^{-br} (2br)^{L+1} L_n^{2L+1}(2br),   L = l + (D-3)/2
//! ```
//!
//! They are orthonormal with respect to the weight `1/r`, so `<n|1/r|n'> = δ`.

use std::collections::BTreeMap;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    dimension: u32,
    l: u32,
    b: f64,
}

impl BasisSpec {
    pub fn new(dimension: u32, l: u32, b: f64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidBasis(format!(
                "dimension must be at least 2, got {dimension}"
            )));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidBasis(format!(
                "scale b must be positive and finite, got {b}"
            )));
        }
        Ok(Self { dimension, l, b })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Same dimension and angular momentum, different scale.
    pub fn with_scale(&self, b: f64) -> Result<Self> {
        Self::new(self.dimension, self.l, b)
    }

    /// Effective angular momentum `L = l + (D-3)/2`; half-integer for even `D`.
    pub fn effective_l(&self) -> f64 {
        self.l as f64 + (self.dimension as f64 - 3.0) / 2.0
    }

    /// Order `2L+1` of the associated Laguerre polynomials. Always a non-negative integer.
    pub fn laguerre_order(&self) -> f64 {
        2.0 * self.effective_l() + 1.0
    }

    /// Sturmian eigenvalue `λ = (n+L+1) b` of state `n`.
    pub fn lambda(&self, n: usize) -> f64 {
        (n as f64 + self.effective_l() + 1.0) * self.b
    }

    /// `ln c_n` with `c_n = sqrt(Γ(n+1)/Γ(n+2L+2))`.
    pub fn ln_normalization(&self, n: usize) -> f64 {
        let alpha = self.laguerre_order();
        0.5 * (ln_gamma(n as f64 + 1.0) - ln_gamma(n as f64 + alpha + 1.0))
    }
}

/// Coefficients `a_i` of `v(r) = Σ_{i=-1}^{k} a_i r^i`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PotentialSpec {
    coeffs: BTreeMap<i32, f64>,
}

impl PotentialSpec {
    /// Builds a potential from `(power, coefficient)` terms. Repeated powers
    /// are summed and zero coefficients are dropped.
    pub fn new<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, f64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (power, value) in terms {
            if power < -1 {
                return Err(Error::UnsupportedPower(power));
            }
            if !value.is_finite() {
                return Err(Error::InvalidPotential(format!(
                    "coefficient of r^{power} is not finite"
                )));
            }
            *coeffs.entry(power).or_insert(0.0) += value;
        }
        coeffs.retain(|_, v| *v != 0.0);
        Ok(Self { coeffs })
    }

    /// `v = 0`.
    pub fn free() -> Self {
        Self::default()
    }

    pub fn coulomb(charge: f64) -> Self {
        Self::new([(-1, charge)]).expect("valid coulomb term")
    }

    /// `Z/r + α r`.
    pub fn cornell(charge: f64, slope: f64) -> Self {
        Self::new([(-1, charge), (1, slope)]).expect("valid cornell terms")
    }

    /// `ω²r²/2`.
    pub fn oscillator(omega: f64) -> Self {
        Self::new([(2, 0.5 * omega * omega)]).expect("valid oscillator term")
    }

    /// `Z/r + ω²r²/2`.
    pub fn coulomb_oscillator(charge: f64, omega: f64) -> Self {
        Self::new([(-1, charge), (2, 0.5 * omega * omega)]).expect("valid terms")
    }

    pub fn coefficient(&self, power: i32) -> f64 {
        self.coeffs.get(&power).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs.iter().map(|(&p, &v)| (p, v))
    }

    /// Highest power with a nonzero coefficient, `None` for the free particle.
    pub fn degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Half-bandwidth of `z S - H` on the basis: `max(1, k+1)`.
    pub fn half_bandwidth(&self) -> usize {
        match self.degree() {
            Some(k) if k >= 0 => (k + 1).max(1) as usize,
            _ => 1,
        }
    }

    /// True when the spectrum below the continuum is purely discrete in the
    /// sense used by the pole search: a growing leading term, or an attractive
    /// Coulomb tail with nothing above it.
    pub fn is_confining(&self) -> bool {
        match self.degree() {
            Some(k) if k >= 1 => self.coefficient(k) > 0.0,
            Some(_) => self.coefficient(-1) < 0.0,
            None => false,
        }
    }
}

/// Radial basis function `<r|n>`.
pub fn cs_radial_eval(basis: &BasisSpec, n: usize, r: f64) -> Result<f64> {
    Ok(cs_radial_values(basis, n + 1, r)?[n])
}

/// `<r|n>` for `n = 0..count`, from a single pass of the normalized upward
/// Laguerre recurrence.
pub fn cs_radial_values(basis: &BasisSpec, count: usize, r: f64) -> Result<Vec<f64>> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeRadius(r));
    }
    let mut out = vec![0.0; count];
    if count == 0 || r == 0.0 {
        return Ok(out);
    }
    let alpha = basis.laguerre_order();
    let ell = basis.effective_l();
    let x = 2.0 * basis.b() * r;
    // e^{-x/2} x^{L+1} c_0, combined in log space
    let prefactor = (-0.5 * x + (ell + 1.0) * x.ln() + basis.ln_normalization(0)).exp();

    // φ_n = (c_n / c_0) L_n^α(x) obeys a symmetric three-term recurrence
    let mut prev = 0.0;
    let mut cur = 1.0;
    for (n, slot) in out.iter_mut().enumerate() {
        *slot = prefactor * cur;
        let nf = n as f64;
        let next = ((2.0 * nf + alpha + 1.0 - x) * cur - (nf * (nf + alpha)).sqrt() * prev)
            / ((nf + 1.0) * (nf + alpha + 1.0)).sqrt();
        prev = cur;
        cur = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_angular_momentum() {
        assert_eq!(BasisSpec::new(3, 0, 1.0).unwrap().effective_l(), 0.0);
        assert_eq!(BasisSpec::new(2, 0, 1.0).unwrap().effective_l(), -0.5);
        assert_eq!(BasisSpec::new(4, 2, 1.0).unwrap().effective_l(), 2.5);
        let b = BasisSpec::new(3, 1, 2.0).unwrap();
        assert_eq!(b.lambda(3), 10.0);
    }

    #[test]
    fn rejects_bad_basis() {
        assert!(BasisSpec::new(1, 0, 1.0).is_err());
        assert!(BasisSpec::new(3, 0, 0.0).is_err());
        assert!(BasisSpec::new(3, 0, -1.0).is_err());
        assert!(BasisSpec::new(3, 0, f64::NAN).is_err());
    }

    #[test]
    fn potential_degree_and_confinement() {
        let cornell = PotentialSpec::cornell(-1.0, 1.0);
        assert_eq!(cornell.degree(), Some(1));
        assert_eq!(cornell.half_bandwidth(), 2);
        assert!(cornell.is_confining());

        let osc = PotentialSpec::oscillator(1.0);
        assert_eq!(osc.coefficient(2), 0.5);
        assert_eq!(osc.half_bandwidth(), 3);

        assert!(PotentialSpec::coulomb(-1.0).is_confining());
        assert!(!PotentialSpec::coulomb(1.0).is_confining());
        assert!(!PotentialSpec::free().is_confining());
        assert_eq!(PotentialSpec::free().half_bandwidth(), 1);
        assert!(!PotentialSpec::new([(1, -1.0)]).unwrap().is_confining());
        // constant shift plus attractive coulomb
        assert!(PotentialSpec::new([(-1, -1.0), (0, 3.0)]).unwrap().is_confining());
    }

    #[test]
    fn potential_rejects_low_powers_and_drops_zeros() {
        assert_eq!(
            PotentialSpec::new([(-2, 1.0)]),
            Err(Error::UnsupportedPower(-2))
        );
        let p = PotentialSpec::new([(3, 0.0), (1, 1.0), (1, 1.0)]).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coefficient(1), 2.0);
    }

    #[test]
    fn ground_state_of_hydrogen_like_function() {
        let basis = BasisSpec::new(3, 0, 1.0).unwrap();
        let v = cs_radial_eval(&basis, 0, 1.0).unwrap();
        assert!((v - 2.0 * (-1.0f64).exp()).abs() < 1e-14);
        assert!((v - 0.735758882343).abs() < 1e-12);
    }

    #[test]
    fn vanishes_at_origin() {
        for (d, l) in [(2, 0), (3, 0), (3, 2), (5, 1)] {
            let basis = BasisSpec::new(d, l, 1.3).unwrap();
            for v in cs_radial_values(&basis, 20, 0.0).unwrap() {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn negative_radius_is_a_domain_error() {
        let basis = BasisSpec::new(3, 0, 1.0).unwrap();
        assert_eq!(
            cs_radial_eval(&basis, 0, -0.5),
            Err(Error::NegativeRadius(-0.5))
        );
    }

    #[test]
    fn matches_arbitrary_precision_values() {
        // reference values from a 400-digit evaluation of the explicit Laguerre sum
        let cases: [(u32, u32, f64, usize, f64, f64); 6] = [
            (2, 0, 1.0, 1, 0.5, 0.0),
            (2, 0, 1.0, 2, 0.5, -0.3032653298563167118),
            (2, 0, 1.0, 5, 1.3, 0.45565336193913085603),
            (4, 2, 0.7, 30, 12.5, 0.48752058483989634531),
            (3, 1, 2.0, 200, 40.0, -0.46048233035139843472),
            (2, 3, 1.5, 170, 7.25, 0.19714069494326692052),
        ];
        for (d, l, b, n, r, expected) in cases {
            let basis = BasisSpec::new(d, l, b).unwrap();
            let got = cs_radial_eval(&basis, n, r).unwrap();
            assert!(
                (got - expected).abs() <= 1e-12 * expected.abs().max(1.0),
                "D={d} l={l} b={b} n={n} r={r}: {got} vs {expected}"
            );
        }
    }
}
