// SPDX-License-Identifier: Apache-2.0

//! Criterion benchmarks for `impdens`; see `benches/`.
