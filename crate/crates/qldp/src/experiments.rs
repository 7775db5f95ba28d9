//! Figure tables: fidelity of Dep vs GAD at equal ε (fig2), the DepN
//! privacy/utility curve (fig3) and the optimal fidelity against qubit
//! count (fig4).

use crate::table::{Cell, Record};

pub const FIG2_Q: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];
pub const FIG2_POINTS: usize = 120;
pub const FIG2_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    pub fn records(self) -> Vec<Record> {
        match self {
            Figure::Fig2 => fig2(),
            Figure::Fig3 => fig3(),
            Figure::Fig4 => fig4(),
        }
    }
}

/// Fidelity of the 1-qubit depolarizing channel tuned to ε.
pub fn dep_fidelity(eps: f64) -> f64 {
    let e = eps.exp();
    e / (e + 1.0)
}

/// Damping γ that gives GAD(q, γ) the privacy level ε.
pub fn gad_gamma(eps: f64, q: f64) -> f64 {
    let e = eps.exp();
    e / (q * (1.0 - q) * (e + 1.0) * (e + 1.0))
}

/// Fidelity of GAD(q, γ(ε, q)) for q ≥ 1/2.
pub fn gad_fidelity(eps: f64, q: f64) -> f64 {
    let e = eps.exp();
    1.0 - e / ((1.0 - q) * (e + 1.0) * (e + 1.0))
}

pub fn fig2() -> Vec<Record> {
    let grid: Vec<f64> = (1..=FIG2_POINTS).map(|i| i as f64 * FIG2_STEP).collect();
    let mut rows = Vec::with_capacity(grid.len() * (1 + FIG2_Q.len()));
    for &eps in &grid {
        rows.push(
            Record::new()
                .with("mechanism", "Dep")
                .with("q", Cell::Empty)
                .with("epsilon", eps)
                .with("fidelity", dep_fidelity(eps))
                .with("feasible", true),
        );
    }
    for &q in &FIG2_Q {
        for &eps in &grid {
            rows.push(
                Record::new()
                    .with("mechanism", "GAD")
                    .with("q", q)
                    .with("epsilon", eps)
                    .with("fidelity", gad_fidelity(eps, q))
                    .with("feasible", gad_gamma(eps, q) <= 1.0),
            );
        }
    }
    rows
}

pub fn fig3() -> Vec<Record> {
    let mut rows = Vec::new();
    for n in 1..=5u32 {
        let d = (1u64 << n) as f64;
        for i in 0..=99 {
            let p = i as f64 / 100.0;
            rows.push(
                Record::new()
                    .with("n", n)
                    .with("p", p)
                    .with("epsilon_star", (d * p / (1.0 - p)).ln_1p())
                    .with("fidelity", ((d - 1.0) * p + 1.0) / d),
            );
        }
    }
    rows
}

pub fn fig4() -> Vec<Record> {
    let mut rows = Vec::new();
    for e in 0..=4u32 {
        let eps = e as f64;
        for n in 1..=10u32 {
            rows.push(
                Record::new()
                    .with("epsilon", eps)
                    .with("n", n)
                    .with("fidelity", qldp_core::utility::tradeoff_bound(n, eps)),
            );
        }
    }
    rows
}
