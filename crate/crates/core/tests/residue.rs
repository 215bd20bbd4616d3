mod common;

use cs_green::{
    contour_projector, eigenstate_eval, find_eigenvalues, hamiltonian_matrix, overlap_matrix, residue_at,
    state_for_level, BandedHamiltonian, BasisSpec, ContourOptions, Eigenstate, Error, PotentialSpec,
    SearchOptions,
};

fn ham(d: u32, pot: PotentialSpec) -> BandedHamiltonian {
    BandedHamiltonian::new(BasisSpec::new(d, 0, 1.0).unwrap(), pot)
}

fn lowest_states(h: &BandedHamiltonian, window: (f64, f64), n: usize, count: usize) -> Vec<Eigenstate> {
    let opts = SearchOptions {
        count: Some(count),
        validate: false,
        ..SearchOptions::default()
    };
    let spectrum = find_eigenvalues(h, window, n, &opts).unwrap();
    assert_eq!(spectrum.levels.len(), count);
    (0..count)
        .map(|i| state_for_level(h, &spectrum, i, n, &ContourOptions::default()).unwrap())
        .collect()
}

fn bilinear(matrix: &cs_green::BandedSymmetric<f64>, x: &[f64], y: &[f64]) -> f64 {
    let dense = matrix.to_dense();
    (0..x.len())
        .flat_map(|i| (0..y.len()).map(move |j| (i, j)))
        .map(|(i, j)| x[i] * dense[(i, j)] * y[j])
        .sum()
}

fn check_states(h: &BandedHamiltonian, states: &[Eigenstate]) {
    let size = states[0].coefficients.len();
    let s = overlap_matrix(h.basis(), size).unwrap();
    let hm = hamiltonian_matrix(h.basis(), h.potential(), size).unwrap();
    for (i, a) in states.iter().enumerate() {
        assert!(a.rank_defect < 1e-8, "state {i}: rank defect {}", a.rank_defect);
        assert!(a.norm_defect < 1e-9, "state {i}: norm defect {}", a.norm_defect);
        let c = &a.coefficients;
        assert!((bilinear(&s, c, c) - 1.0).abs() < 1e-12);
        let rayleigh = bilinear(&hm, c, c) / bilinear(&s, c, c);
        assert!(
            (rayleigh - a.energy).abs() < 1e-8 * a.energy.abs().max(1.0),
            "state {i}: Rayleigh {rayleigh} vs {}",
            a.energy
        );
        let largest = c.iter().cloned().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        assert!(largest > 0.0);
        for b in &states[i + 1..] {
            let cross = bilinear(&s, c, &b.coefficients);
            assert!(cross.abs() < 1e-8, "overlap {cross}");
        }
    }
}

#[test]
fn oscillator_states() {
    let h = ham(3, PotentialSpec::oscillator(1.0));
    let states = lowest_states(&h, (0.0, 6.0), 30, 3);
    check_states(&h, &states);
    let ground = &states[0];
    let norm = 2.0 * std::f64::consts::PI.powf(-0.25);
    for k in 0..=600 {
        let r = k as f64 * 0.01;
        let psi = eigenstate_eval(h.basis(), ground, r).unwrap();
        let exact = norm * r * (-0.5 * r * r).exp();
        assert!((psi - exact).abs() < 1e-6, "r = {r}: {psi} vs {exact}");
    }
}

#[test]
fn cornell_states() {
    let h = ham(3, PotentialSpec::cornell(-1.0, 1.0));
    let states = lowest_states(&h, (0.0, 4.0), 40, 3);
    check_states(&h, &states);
    assert_eq!(eigenstate_eval(h.basis(), &states[1], 0.0).unwrap(), 0.0);
}

#[test]
fn coulomb_oscillator_states() {
    let h = ham(2, PotentialSpec::coulomb_oscillator(-1.0, 1.0));
    let states = lowest_states(&h, (-2.5, 4.5), 30, 3);
    check_states(&h, &states);
}

#[test]
fn hydrogen_ground_state() {
    let h = ham(3, PotentialSpec::coulomb(-1.0));
    let states = lowest_states(&h, (-0.6, -0.05), 80, 3);
    check_states(&h, &states);
    for k in 0..=1000 {
        let r = k as f64 * 0.01;
        let psi = eigenstate_eval(h.basis(), &states[0], r).unwrap();
        let exact = 2.0 * r * (-r).exp();
        assert!((psi - exact).abs() < 1e-6, "r = {r}: {psi} vs {exact}");
    }
}

#[test]
fn halving_the_radius_keeps_the_state() {
    let h = ham(3, PotentialSpec::cornell(-1.0, 1.0));
    let e0 = 0.577921351961;
    let wide = ContourOptions {
        radius: Some(0.4),
        ..ContourOptions::default()
    };
    let narrow = ContourOptions {
        radius: Some(0.2),
        ..ContourOptions::default()
    };
    let a = residue_at(&h, e0, 40, &wide).unwrap();
    let b = residue_at(&h, e0, 40, &narrow).unwrap();
    let change = a
        .coefficients
        .iter()
        .zip(&b.coefficients)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(change < 1e-8, "change {change}");
}

#[test]
fn empty_contour_has_vanishing_residue() {
    let h = ham(3, PotentialSpec::oscillator(1.0));
    let residue = contour_projector(&h, 2.5, 0.5, 0, &ContourOptions::default()).unwrap();
    let largest = residue.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    assert!(largest < 1e-10, "{largest}");
}

#[test]
fn contour_around_two_levels_is_degenerate() {
    let h = ham(3, PotentialSpec::oscillator(1.0));
    let opts = ContourOptions {
        radius: Some(1.5),
        ..ContourOptions::default()
    };
    assert!(matches!(residue_at(&h, 2.5, 0, &opts), Err(Error::Degenerate { .. })));
}

#[test]
fn oversized_contour_is_refused() {
    let h = ham(3, PotentialSpec::oscillator(1.0));
    let spectrum = find_eigenvalues(&h, (0.0, 6.0), 0, &SearchOptions::default()).unwrap();
    let opts = ContourOptions {
        radius: Some(2.5),
        ..ContourOptions::default()
    };
    assert!(matches!(state_for_level(&h, &spectrum, 0, 0, &opts), Err(Error::Contour(_))));
    assert!(residue_at(&h, 1.5, 0, &ContourOptions::default()).is_err());
}
