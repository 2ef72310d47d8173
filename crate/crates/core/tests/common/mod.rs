//! Independent reference implementations and the shared state catalog.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_3, PI};

use quantum_flow::kinematics::DEFAULT_RELATIVE_NODE_THRESHOLD;
use quantum_flow::numerics::Exclusion;
use quantum_flow::prelude::*;

/// Polynomial as ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly(vec![1.0]), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// `Σ |c_k x^k|`, the scale against which rounding in `eval` is measured.
    pub fn magnitude(&self, x: f64) -> f64 {
        self.0.iter().enumerate().map(|(k, c)| (c * x.powi(k as i32)).abs()).sum()
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| c * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0))
            .sum()
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Explicit sum `H_n(x) = n! Σ_k (-1)^k (2x)^{n-2k} / (k! (n-2k)!)`.
pub fn hermite_series(n: u32) -> Poly {
    let mut c = vec![0.0; n as usize + 1];
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let p = n - 2 * k;
        c[p as usize] = sign * factorial(n) * 2f64.powi(p as i32) / (factorial(k) * factorial(p));
    }
    Poly(c)
}

/// Polynomial part of the Rodrigues form:
/// `P_l^m(x) = (1-x²)^{m/2} · D^{l+m}[(x²-1)^l] / (2^l l!)`.
pub fn legendre_rodrigues(l: u32, m: u32) -> Poly {
    let mut p = Poly(vec![-1.0, 0.0, 1.0]).pow(l);
    for _ in 0..l + m {
        p = p.derivative();
    }
    let scale = 1.0 / (2f64.powi(l as i32) * factorial(l));
    Poly(p.0.into_iter().map(|c| c * scale).collect())
}

pub fn legendre_oracle(l: u32, m: u32, x: f64) -> (f64, f64) {
    let p = legendre_rodrigues(l, m);
    let w = (1.0 - x * x).powf(f64::from(m) / 2.0);
    (w * p.eval(x), w * p.magnitude(x))
}

/// `2π C² ∫_{-1}^{1} P_l^m(x)² dx`, integrated exactly; 1 for the right `C`.
pub fn harmonic_norm_integral(l: u32, m: u32, c: f64) -> f64 {
    let p = legendre_rodrigues(l, m);
    let weight = Poly(vec![1.0, 0.0, -1.0]).pow(m);
    2.0 * PI * c * c * p.mul(&p).mul(&weight).integral(-1.0, 1.0)
}

/// Trapezoid rule for `∫ (N H_n(αx) e^{-α²x²/2})² dx`; spectrally accurate
/// for Gaussian-decaying integrands.
pub fn oscillator_norm_integral(n: u32, alpha: f64, norm: f64) -> f64 {
    let h = hermite_series(n);
    let half = 14.0 / alpha;
    let steps = 8000;
    let dx = 2.0 * half / f64::from(steps);
    (0..=steps)
        .map(|k| {
            let x = -half + f64::from(k) * dx;
            let u = alpha * x;
            let f = norm * h.eval(u) * (-0.5 * u * u).exp();
            let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
            w * f * f
        })
        .sum::<f64>()
        * dx
}

/// Hydrogen-like 2p profile `r e^{-r/2}` tabulated on `[0.05, 12]`.
pub fn tabulated_radial() -> RadialChoice {
    let radii: Vec<f64> = (0..=400).map(|k| 0.05 + k as f64 * (11.95 / 400.0)).collect();
    let values = radii.iter().map(|r| r * (-0.5 * r).exp()).collect();
    RadialChoice::Table { radii, values }
}

pub struct CatalogEntry {
    pub name: String,
    pub state: StateSpec,
}

/// Every catalog variant across its parameter ranges.
pub fn catalog() -> Vec<CatalogEntry> {
    let natural = PhysicalConstants::NATURAL;
    let scaled = PhysicalConstants::new(2.0, 3.0).unwrap();
    let mut out = Vec::new();
    let mut push = |name: String, state: StateSpec| out.push(CatalogEntry { name, state });

    push("plane_wave(1,2)".into(), StateSpec::plane_wave(1.0, 2.0, 0.7, natural).unwrap());
    push("plane_wave(-0.5,3) hbar=2 m=3".into(), StateSpec::plane_wave(-0.5, 3.0, 2.0, scaled).unwrap());
    for (nx, ny) in [(0, 0), (1, 0), (2, 1), (3, 3)] {
        push(format!("oscillator({nx},{ny})"), StateSpec::oscillator(nx, ny, 1.0, natural).unwrap());
    }
    push("oscillator(2,3) omega=2.5".into(), StateSpec::oscillator(2, 3, 2.5, natural).unwrap());
    for l in 0..=3u32 {
        for ml in -(l as i32)..=l as i32 {
            // P_l^m vanishes on the equator when l - |m| is odd
            let spec = CentralFieldSpec::new(l, ml).unwrap();
            let (spec, tag) =
                if (l - ml.unsigned_abs()) % 2 == 1 { (spec.with_theta(FRAC_PI_3), " theta=pi/3") } else { (spec, "") };
            push(format!("central({l},{ml}){tag}"), StateSpec::central(spec, natural).unwrap());
        }
    }
    push("central(2,-2) hbar=2 m=3".into(), StateSpec::central(CentralFieldSpec::new(2, -2).unwrap(), scaled).unwrap());
    push(
        "central(3,3) theta=pi/3".into(),
        StateSpec::central(CentralFieldSpec::new(3, 3).unwrap().with_theta(FRAC_PI_3), natural).unwrap(),
    );
    push(
        "central(1,1) tabulated".into(),
        StateSpec::central(CentralFieldSpec::new(1, 1).unwrap().with_radial(tabulated_radial()), natural).unwrap(),
    );
    out
}

pub const NODE_WIDTH: f64 = 1e-2;
pub const STEP: f64 = 1e-4;

/// Sweep grid with at least 10³ points left after node and core exclusions.
pub fn sweep_grid(state: &StateSpec) -> Grid2D {
    let base = state.default_grid();
    let kind = match base.kind {
        quantum_flow::numerics::GridKind::Cartesian { x0, x1, y0, y1, .. } => {
            quantum_flow::numerics::GridKind::Cartesian { x0, x1, y0, y1, nx: 40, ny: 40 }
        }
        other => other,
    };
    let exclusions: Vec<Exclusion> = state.node_exclusions(NODE_WIDTH, 10.0 * STEP);
    Grid2D::new(kind).unwrap().with_exclusions(exclusions)
}

pub fn threshold(state: &StateSpec, grid: &Grid2D) -> NodeThreshold {
    NodeThreshold::relative_to_peak(state, grid, DEFAULT_RELATIVE_NODE_THRESHOLD).unwrap()
}

pub fn sweep_points(grid: &Grid2D) -> Vec<Point2D> {
    grid.points().into_iter().map(|gp| gp.point).collect()
}
