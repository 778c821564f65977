// SPDX-License-Identifier: Apache-2.0

//! Fixed inputs for the benchmarks, so that every run measures the same work.

use biq_core::sampling::gaussian_matrix;
use biq_core::{zoo, ComplexMatrix, KrausChannel, SampleStream};

const SEED: u64 = 0x6265_6e63;

pub fn stream(id: u64) -> SampleStream {
    SampleStream::new(SEED, id)
}

/// Random two-qubit density matrix of the given rank.
pub fn mixed_state(rank: usize) -> ComplexMatrix {
    let g = gaussian_matrix(4, rank, &mut stream(rank as u64).rng());
    let rho = g.matmul_adjoint(&g);
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitian_part()
}

/// Random Hermitian matrix of size `n`.
pub fn hermitian(n: usize) -> ComplexMatrix {
    gaussian_matrix(n, n, &mut stream(100 + n as u64).rng()).hermitian_part()
}

/// Random two-qubit channel with `env` Kraus operators.
pub fn channel(env: usize) -> KrausChannel {
    zoo::random_channel(2, 2, env, &mut stream(200 + env as u64).rng())
}
