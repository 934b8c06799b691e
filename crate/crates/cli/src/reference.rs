//! Published reference eigenvalues (xi = 3, six levels per row) bundled for
//! the `table1` audit, plus the row-trust policy.

/// Row order of the reference table.
pub const REFERENCE_M: [i32; 19] = [
    -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12,
];

/// Reference values transcribed verbatim from the published table.
pub const REFERENCE_EPS: [[f64; 6]; 19] = [
    [21.6608, 35.7557, 51.3448, 68.3341, 86.6500, 106.233],
    [18.1891, 31.3844, 46.1503, 62.3746, 79.9715, 98.8740],
    [14.6806, 26.9167, 40.8214, 56.2549, 73.1150, 91.3249],
    [11.1259, 22.3314, 35.3346, 49.9525, 66.0599, 83.5680],
    [7.51110, 17.5996, 29.6610, 43.4412, 58.7838, 75.5860],
    [3.81463, 12.6800, 23.7644, 36.6914, 51.2639, 67.3635],
    [0.00007, 7.51170, 17.6027, 29.6729, 43.4799, 58.8919],
    [-3.99968, 2.00200, 11.1343, 22.3606, 35.4208, 50.1750],
    [-8.32288, -3.99300, 4.34771, 14.7494, 27.0959, 41.2385],
    [-13.2815, -10.6927, -2.64788, 6.87526, 18.5501, 32.1389],
    [-19.5196, -9.46859, -1.17161, 9.87916, 22.9677, 38.0537],
    [-27.7547, -15.7094, -9.29612, 1.24110, 13.8439, 28.5940],
    [-38.0314, -21.6913, -17.5131, -7.12621, 4.89289, 19.3065],
    [-49.9928, -28.2027, -25.9897, -14.8827, -3.78434, 10.2625],
    [-63.3335, -35.8866, -21.7455, -12.1464, 1.51447, 17.5661],
    [-77.8339, -44.5255, -27.8571, -20.2355, -6.89162, 8.76577],
    [-93.3024, -54.9017, -33.6970, -28.1690, -14.8944, 0.229704],
    [-109.592, -65.743, -39.7373, -36.1005, -22.4007, -8.04337],
    [-126.580, -77.2416, -46.3335, -29.3139, -16.0647, 1.06475],
];

/// Rows up to this `m` gate the audit; rows above it are reported as
/// informational only. The high-`m` rows of the published table show
/// ordering and spacing anomalies (see the README notes on the reference
/// table), so they are compared but never enforced.
pub const TRUSTED_MAX_M: i32 = 3;

/// FNV-1a digest of the formatted table, pinned by a test so accidental
/// edits to the constants cannot slip through.
pub fn reference_checksum() -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for row in &REFERENCE_EPS {
        for &v in row {
            for b in crate::fmt::f9(v).bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    h
}
