//! Emulation of the two per-mode circuits.
//!
//! Circuit a loads `|k>_0`, applies the `T` coin-and-shift rotations and is
//! read out in the x, y and z bases. Circuit b prepares an ancilla in `|+>`,
//! applies the same rotations controlled on it, and reads the ancilla in the
//! x and y bases; the system qubit is traced out. Noise is emulated exactly on
//! the density matrix and sampling draws binomial counts.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::encoding::{bloch_state, ModeEncoding};
use super::tomography::{Basis, BasisCounts, HadamardCounts, TomographyCounts};
use super::HybridConfig;
use crate::error::{Error, Result};
use crate::field::Spinor;
use crate::grid::GridSpec;
use crate::unitary::Unitary2;
use crate::walk::{shift_phases_unchecked, CoinSchedule, WalkParams};

const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Single-qubit depolarizing probability applied after every coin step.
    pub depolarizing_per_gate: f64,
    /// Symmetric readout bit-flip probability.
    pub readout_flip: f64,
    pub enabled: bool,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            depolarizing_per_gate: 0.0,
            readout_flip: 0.0,
            enabled: false,
        }
    }

    /// Preset sized to land the N=32 shock run inside the few-to-tens of
    /// percent relative error seen on current superconducting devices.
    pub fn nisq_like() -> Self {
        Self {
            depolarizing_per_gate: 8e-2,
            readout_flip: 1.5e-2,
            enabled: true,
        }
    }

    pub fn new(depolarizing_per_gate: f64, readout_flip: f64) -> Result<Self> {
        let n = Self {
            depolarizing_per_gate,
            readout_flip,
            enabled: true,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("depolarizing_per_gate", self.depolarizing_per_gate),
            ("readout_flip", self.readout_flip),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }

    fn depolarizing(&self) -> f64 {
        if self.enabled {
            self.depolarizing_per_gate
        } else {
            0.0
        }
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::noiseless()
    }
}

/// 2x2 block of a density matrix.
#[derive(Debug, Clone, Copy)]
struct Block([[Complex64; 2]; 2]);

impl Block {
    fn outer(a: Spinor, b: Spinor) -> Self {
        Block([[a.l * b.l.conj(), a.l * b.r.conj()], [a.r * b.l.conj(), a.r * b.r.conj()]])
    }

    fn scaled(self, s: f64) -> Self {
        Block(self.0.map(|row| row.map(|v| v * s)))
    }

    fn plus(self, other: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }

    fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    fn left(self, u: &Unitary2) -> Self {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = u.m[i][0] * self.0[0][j] + u.m[i][1] * self.0[1][j];
            }
        }
        Block(out)
    }

    /// `self * u^dagger`.
    fn right_dagger(self, u: &Unitary2) -> Self {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][0] * u.m[j][0].conj() + self.0[i][1] * u.m[j][1].conj();
            }
        }
        Block(out)
    }

    /// `(1 - p) X + p Tr(X) I / 2`.
    fn depolarize(self, p: f64) -> Self {
        if p == 0.0 {
            return self;
        }
        let half_tr = self.trace() * (0.5 * p);
        let mut out = self.scaled(1.0 - p);
        out.0[0][0] += half_tr;
        out.0[1][1] += half_tr;
        out
    }
}

fn bloch_of(rho: &Block) -> [f64; 3] {
    [
        2.0 * rho.0[1][0].re,
        2.0 * rho.0[1][0].im,
        (rho.0[0][0] - rho.0[1][1]).re,
    ]
}

#[cfg(test)]
fn pure_bloch(v: Spinor) -> [f64; 3] {
    let c = v.l.conj() * v.r;
    [2.0 * c.re, 2.0 * c.im, v.l.norm_sqr() - v.r.norm_sqr()]
}

/// Exact expectation values that the circuits would estimate, readout
/// errors included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitExpectations {
    /// Circuit a: `(<X>, <Y>, <Z>)` of the final system qubit.
    pub bloch: [f64; 3],
    /// Circuit b: ancilla `<X> + i <Y>`.
    pub overlap: Complex64,
}

/// Final reduced states of the two circuits before the basis rotation.
#[derive(Debug, Clone, Copy)]
struct FinalStates {
    system: Block,
    ancilla: Block,
    readout_flip: f64,
}

impl FinalStates {
    /// Probability of outcome 0 after rotating `rho` into `basis` and
    /// applying the symmetric readout flip.
    fn outcome_zero(rho: &Block, basis: Basis, flip: f64) -> Result<f64> {
        let r = basis_rotation(basis);
        let p0 = rho.left(&r).right_dagger(&r).0[0][0].re;
        check_probability(p0)?;
        let p0 = p0.clamp(0.0, 1.0);
        Ok((1.0 - flip) * p0 + flip * (1.0 - p0))
    }

    fn expectations(&self) -> CircuitExpectations {
        let contrast = 1.0 - 2.0 * self.readout_flip;
        let [ax, ay, _] = bloch_of(&self.ancilla);
        CircuitExpectations {
            bloch: bloch_of(&self.system).map(|v| v * contrast),
            overlap: Complex64::new(ax, ay) * contrast,
        }
    }
}

/// Pre-measurement rotation: `H` for x, `H S^dagger` for y, identity for z.
pub fn basis_rotation(basis: Basis) -> Unitary2 {
    match basis {
        Basis::X => Unitary2::hadamard(),
        Basis::Y => Unitary2::hadamard() * Unitary2::s_dagger(),
        Basis::Z => Unitary2::IDENTITY,
    }
}

/// Per-step evolution operators for one mode.
fn step_ops(schedule: &CoinSchedule, k: i64, n: usize) -> impl Iterator<Item = Unitary2> + '_ {
    let (pl, pr) = shift_phases_unchecked(k, n);
    schedule.coins().iter().map(move |c| c.mul_diag(pl, pr))
}

fn final_states(
    enc: &ModeEncoding,
    schedule: &CoinSchedule,
    n: usize,
    noise: &NoiseModel,
) -> FinalStates {
    let start = bloch_state(enc);
    let p = noise.depolarizing();
    let (system, ancilla_coherence) = if p == 0.0 {
        let end = schedule.propagator(enc.k, n).apply(start);
        let ov = start.l.conj() * end.l + start.r.conj() * end.r;
        (Block::outer(end, end), ov * 0.5)
    } else {
        let mut rho = Block::outer(start, start);
        // ancilla (x) system blocks [[r00, r01], [r10, r11]]
        let base = rho.scaled(0.5);
        let (mut r00, mut r01, mut r10, mut r11) = (base, base, base, base);
        for g in step_ops(schedule, enc.k, n) {
            rho = rho.left(&g).right_dagger(&g).depolarize(p);

            r01 = r01.right_dagger(&g).depolarize(p);
            r10 = r10.left(&g).depolarize(p);
            r11 = r11.left(&g).right_dagger(&g).depolarize(p);
            r00 = r00.depolarize(p);
            let (a, b) = (r00, r11);
            r00 = a.scaled(1.0 - 0.5 * p).plus(b.scaled(0.5 * p));
            r11 = b.scaled(1.0 - 0.5 * p).plus(a.scaled(0.5 * p));
            r01 = r01.scaled(1.0 - p);
            r10 = r10.scaled(1.0 - p);
        }
        // symmetrised against round-off in the mirror block
        let (a10, a01) = (r10.trace(), r01.trace());
        (rho, Complex64::new(a10.re + a01.re, a10.im - a01.im) * 0.5)
    };
    let half = Complex64::new(0.5, 0.0);
    let ancilla = Block([
        [half, ancilla_coherence.conj()],
        [ancilla_coherence, half],
    ]);
    FinalStates {
        system,
        ancilla,
        readout_flip: if noise.enabled { noise.readout_flip } else { 0.0 },
    }
}

pub fn exact_expectations(
    enc: &ModeEncoding,
    schedule: &CoinSchedule,
    n: usize,
    noise: &NoiseModel,
) -> CircuitExpectations {
    final_states(enc, schedule, n, noise).expectations()
}

/// Stream id for one mode and circuit so that draws do not depend on the
/// order in which modes are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stream {
    CircuitA = 0,
    CircuitB = 1,
    CircuitBRetry = 2,
}

pub(crate) fn mode_rng(seed: u64, k: i64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((k as u64).wrapping_mul(4).wrapping_add(stream as u64));
    rng
}

fn check_probability(p0: f64) -> Result<()> {
    if !p0.is_finite() || !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p0) {
        return Err(Error::Consistency(format!(
            "outcome probability {p0} outside [0, 1]"
        )));
    }
    Ok(())
}

fn sample(rng: &mut ChaCha8Rng, shots: u64, p0: f64) -> Result<BasisCounts> {
    let zeros = Binomial::new(shots, p0)
        .map_err(|e| Error::Consistency(format!("binomial({shots}, {p0}): {e}")))?
        .sample(rng);
    Ok(BasisCounts {
        zeros,
        ones: shots - zeros,
    })
}

fn sample_tomography(st: &FinalStates, k: i64, shots: u64, seed: u64) -> Result<TomographyCounts> {
    let mut rng = mode_rng(seed, k, Stream::CircuitA);
    let mut draw = |b| -> Result<BasisCounts> {
        let p0 = FinalStates::outcome_zero(&st.system, b, st.readout_flip)?;
        sample(&mut rng, shots, p0)
    };
    let x = draw(Basis::X)?;
    let y = draw(Basis::Y)?;
    let z = draw(Basis::Z)?;
    TomographyCounts::new(shots, x, y, z, seed)
}

fn sample_hadamard(
    st: &FinalStates,
    k: i64,
    shots: u64,
    seed: u64,
    stream: Stream,
) -> Result<HadamardCounts> {
    let mut rng = mode_rng(seed, k, stream);
    let mut draw = |b| -> Result<BasisCounts> {
        let p0 = FinalStates::outcome_zero(&st.ancilla, b, st.readout_flip)?;
        sample(&mut rng, shots, p0)
    };
    let x = draw(Basis::X)?;
    let y = draw(Basis::Y)?;
    HadamardCounts::new(shots, x, y)
}

/// Both circuits for one mode, sampled from a shared final state.
#[derive(Debug, Clone)]
pub(crate) struct ModeCircuits {
    states: FinalStates,
    k: i64,
}

impl ModeCircuits {
    pub(crate) fn new(
        enc: &ModeEncoding,
        schedule: &CoinSchedule,
        n: usize,
        noise: &NoiseModel,
    ) -> Self {
        Self {
            states: final_states(enc, schedule, n, noise),
            k: enc.k,
        }
    }

    pub(crate) fn expectations(&self) -> CircuitExpectations {
        self.states.expectations()
    }

    pub(crate) fn circuit_a(&self, shots: u64, seed: u64) -> Result<TomographyCounts> {
        sample_tomography(&self.states, self.k, shots, seed)
    }

    pub(crate) fn circuit_b(&self, shots: u64, seed: u64, retry: bool) -> Result<HadamardCounts> {
        let stream = if retry { Stream::CircuitBRetry } else { Stream::CircuitB };
        sample_hadamard(&self.states, self.k, shots, seed, stream)
    }
}

/// Sampled x/y/z counts of the evolved qubit for mode `enc.k`.
pub fn simulate_circuit_a(
    enc: &ModeEncoding,
    steps: usize,
    params: &WalkParams,
    grid: &GridSpec,
    cfg: &HybridConfig,
) -> Result<TomographyCounts> {
    cfg.validate()?;
    grid.slot(enc.k)?;
    let schedule = CoinSchedule::new(steps, params, grid);
    ModeCircuits::new(enc, &schedule, grid.len(), &cfg.noise).circuit_a(cfg.shots, cfg.seed)
}

/// Sampled ancilla counts of the controlled-evolution circuit for mode `enc.k`.
/// Noiseless expectations are `<X> = Re <k0|U_T|k0>`, `<Y> = Im <k0|U_T|k0>`.
pub fn simulate_circuit_b(
    enc: &ModeEncoding,
    steps: usize,
    params: &WalkParams,
    grid: &GridSpec,
    cfg: &HybridConfig,
) -> Result<HadamardCounts> {
    cfg.validate()?;
    grid.slot(enc.k)?;
    let schedule = CoinSchedule::new(steps, params, grid);
    ModeCircuits::new(enc, &schedule, grid.len(), &cfg.noise).circuit_b(cfg.shots, cfg.seed, false)
}
