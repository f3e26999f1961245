//! Shared fixtures for the benchmark suite.

use suq2_cs::basis::Truncation;
use suq2_cs::rep::Rep;

pub fn bench_rep(q: f64, m_max: u32) -> Rep {
    Rep::new(q, Truncation::new(m_max, 8).unwrap()).unwrap()
}
