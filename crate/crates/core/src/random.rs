//! Reproducible random instances for self-tests and property checks.
//!
//! # Seed protocol
//!
//! The generator is SplitMix64 (Steele, Lea & Flood) seeded with the raw
//! 64-bit seed. Every scalar is drawn from one or two consecutive outputs:
//!
//! * a uniform real in `[-1, 1)` is `2·(x >> 11)·2⁻⁵³ − 1`;
//! * a complex scalar is two such reals, real part first;
//! * a matrix is filled in row-major order.
//!
//! Unitaries are the polar factor `UV*` of a random square matrix `UΣV*`, so
//! they depend on the SVD routine as well as on the stream.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::frame::Frame;
use crate::fusion::{FusionBlock, FusionFrame};
use crate::numkernel::{singular_value_decomposition, Field, Mat};
use num_complex::Complex64;

/// Seeded scalar and matrix sampler.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform real in `[-1, 1)`.
    pub fn uniform(&mut self) -> f64 {
        let unit = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * unit - 1.0
    }

    /// Uniform real in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.uniform() + 1.0) / 2.0
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn scalar(&mut self, field: Field) -> Complex64 {
        match field {
            Field::Real => Complex64::new(self.uniform(), 0.0),
            Field::Complex => {
                let re = self.uniform();
                Complex64::new(re, self.uniform())
            }
        }
    }

    pub fn field(&mut self) -> Field {
        if self.next_u64() & 1 == 0 {
            Field::Real
        } else {
            Field::Complex
        }
    }

    /// Matrix with independent uniform entries, filled row by row.
    pub fn matrix(&mut self, field: Field, rows: usize, cols: usize) -> Mat {
        let entries: Vec<Complex64> = (0..rows * cols).map(|_| self.scalar(field)).collect();
        Mat::from_complex(rows, cols, &entries)
            .and_then(|m| m.with_field(field))
            .expect("sampled entries are finite")
    }

    /// Random unitary (orthogonal when `field` is real).
    pub fn unitary(&mut self, field: Field, n: usize) -> Mat {
        let a = self.matrix(field, n, n);
        let svd = singular_value_decomposition(&a).expect("finite input");
        svd.u.matmul(&svd.v.adjoint())
    }

    /// Generic frame or Bessel sequence with uniform entries.
    pub fn frame(&mut self, field: Field, dim: usize, len: usize) -> Frame {
        Frame::new(self.matrix(field, dim, len)).expect("non-empty sample")
    }

    /// Frame whose columns are normalized to unit length.
    pub fn unit_norm_frame(&mut self, field: Field, dim: usize, len: usize) -> Frame {
        let f = self.matrix(field, dim, len);
        let mut data = f.into_dmatrix();
        for mut col in data.column_iter_mut() {
            let norm = col.norm();
            col /= Complex64::new(norm, 0.0);
        }
        Frame::new(Mat::from_dmatrix(data, field).expect("finite")).expect("non-empty sample")
    }

    /// Parseval frame: the first `dim` rows of a random `len x len` unitary.
    pub fn parseval_frame(&mut self, field: Field, dim: usize, len: usize) -> Frame {
        assert!(dim <= len, "a Parseval frame needs at least as many vectors as dimensions");
        Frame::new(self.unitary(field, len).row_range(0, dim)).expect("non-empty sample")
    }

    /// Frame `U·diag(√λ)·V*` whose frame operator has exactly the eigenvalues
    /// `spectrum` (which must have length `dim ≤ len`).
    pub fn frame_with_spectrum(&mut self, field: Field, spectrum: &[f64], len: usize) -> Frame {
        let dim = spectrum.len();
        assert!(dim <= len);
        let u = self.unitary(field, dim);
        let v = self.unitary(field, len).row_range(0, dim);
        let root: Vec<f64> = spectrum.iter().map(|l| l.max(0.0).sqrt()).collect();
        let mut d = Mat::zeros(dim, dim, Field::Real).into_dmatrix();
        for (i, r) in root.iter().enumerate() {
            d[(i, i)] = Complex64::new(*r, 0.0);
        }
        let d = Mat::from_dmatrix(d, Field::Real).expect("finite");
        Frame::new(u.matmul(&d).matmul(&v)).expect("non-empty sample")
    }

    /// Fusion frame with `dims.len()` random subspaces of the given
    /// dimensions and weights uniform in `[0.5, 1.5)`.
    pub fn fusion_frame(&mut self, field: Field, ambient: usize, dims: &[usize]) -> FusionFrame {
        let blocks = dims
            .iter()
            .map(|&d| {
                let basis = self.unitary(field, ambient).column_range(0, d);
                let weight = self.uniform_in(0.5, 1.5);
                FusionBlock { basis, weight }
            })
            .collect();
        FusionFrame::new(ambient, blocks).expect("sampled blocks are valid")
    }
}
