//! Published reference eigenvalues used by the regression harness.
//!
//! Both sets are the lowest 20 levels at `l = 0`, quoted to 12 significant
//! digits.

/// `H_0 - 1/r + r` in three dimensions.
pub const CORNELL_3D: [f64; 20] = [
    0.577921351961,
    2.450162895052,
    3.756905691262,
    4.855671243373,
    5.836029886654,
    6.736620996511,
    7.578378030294,
    8.374205689360,
    9.132754730978,
    9.860176266906,
    10.56103960914,
    11.23885563715,
    11.89639544211,
    12.53589461658,
    13.15918982353,
    13.76781330561,
    14.36306021727,
    14.94603779901,
    15.51770206715,
    16.07888570444,
];

/// `H_0 - 1/r + r²/2` in two dimensions.
pub const COULOMB_OSCILLATOR_2D: [f64; 20] = [
    -1.836207439051,
    1.576895542024,
    3.828388290161,
    5.963137645126,
    8.052626115348,
    10.11839697526,
    12.16972896261,
    14.21142722055,
    16.24628453060,
    18.27605894134,
    20.30192413905,
    22.32469992791,
    24.34497987508,
    26.36320650647,
    28.37971786276,
    30.39477752867,
    32.40859467947,
    34.42133786062,
    36.43314470188,
    38.44412891767,
];

/// Relative tolerance for comparing against the 12-digit references.
pub const REFERENCE_RTOL: f64 = 1e-8;
