//! Matrix permanents and permanent-based transition amplitudes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::elements::ModeUnitary;
use crate::error::{Error, Result};
use crate::fock::OccupationVector;

pub const MAX_PERMANENT_DIM: usize = 20;

/// Permanent by Ryser's inclusion–exclusion formula, visiting column subsets
/// in Gray-code order so each step updates the row sums by one column.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    if n > MAX_PERMANENT_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut in_subset = vec![false; n];
    let mut size = 0usize;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        let sign = if in_subset[col] { -1.0 } else { 1.0 };
        in_subset[col] = !in_subset[col];
        if in_subset[col] {
            size += 1;
        } else {
            size -= 1;
        }
        for (i, sum) in row_sums.iter_mut().enumerate() {
            *sum += m[(i, col)] * sign;
        }
        let product: Complex64 = row_sums.iter().product();
        // (-1)^(n - |S|)
        if (n - size).is_multiple_of(2) {
            total += product;
        } else {
            total -= product;
        }
    }
    Ok(total)
}

fn mode_list(occ: &OccupationVector) -> Vec<usize> {
    occ.counts().iter().enumerate().flat_map(|(mode, &c)| std::iter::repeat_n(mode, c as usize)).collect()
}

fn factorial_product(occ: &OccupationVector) -> f64 {
    occ.counts().iter().map(|&c| (1..=c as u64).product::<u64>() as f64).product()
}

/// `⟨out|Û|in⟩ = perm(U[out rows, in cols]) / √(Π in! · Π out!)`.
pub fn transition_amplitude_permanent(
    u: &ModeUnitary,
    input: &OccupationVector,
    output: &OccupationVector,
) -> Result<Complex64> {
    if input.len() != u.dim() || output.len() != u.dim() {
        return Err(Error::RegistryMismatch);
    }
    let (n_in, n_out) = (input.total(), output.total());
    if n_in != n_out {
        return Err(Error::PhotonNumberMismatch { input: n_in, output: n_out });
    }
    let rows = mode_list(output);
    let cols = mode_list(input);
    let sub = DMatrix::from_fn(n_in, n_in, |r, c| u.matrix()[(rows[r], cols[c])]);
    let norm = (factorial_product(input) * factorial_product(output)).sqrt();
    Ok(permanent(&sub)? / norm)
}
