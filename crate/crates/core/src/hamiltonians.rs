//! Model Hamiltonians of the cyclic three-level atom coupled to one field
//! mode, in the lab frame, the rotating frame and the classically dressed
//! frame, plus the analytic effective Hamiltonians left after eliminating the
//! excited level.
//!
//! Dressed-frame operators use the atom slots `|−⟩, |+⟩, |e⟩` (see
//! [`DressedLevel`]) in the same atom-major layout as the bare basis, so
//! [`dressed_rotation`] maps dressed coordinates to bare ones:
//! `H_bare = R H_dressed R†`.

use log::warn;

use crate::error::{Error, Result};
use crate::numkernel::{
    boson_annihilation, embed, number_operator, AtomLevel, HilbertSpace, Operator, C64, CMatrix,
};

/// Relative tolerance for the frequency matching condition.
const MATCHING_TOL: f64 = 1e-12;

/// Lab-frame parameters. All Rabi frequencies are real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// `|b⟩ ↔ |e⟩` transition frequency.
    pub omega_e: f64,
    /// `|b⟩ ↔ |c⟩` transition frequency.
    pub omega_c: f64,
    /// Frequency of the quantized mode.
    pub omega_mode: f64,
    /// Classical drive frequency on `|b⟩ ↔ |e⟩`.
    pub drive_e: f64,
    /// Classical drive frequency on `|b⟩ ↔ |c⟩`.
    pub drive_c: f64,
    /// Vacuum Rabi frequency of the mode on `|c⟩ ↔ |e⟩`.
    pub g: f64,
    /// Classical Rabi frequency on `|b⟩ ↔ |e⟩`.
    pub rabi_eb: f64,
    /// Classical Rabi frequency on `|b⟩ ↔ |c⟩`.
    pub rabi_bc: f64,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega_e: f64,
        omega_c: f64,
        omega_mode: f64,
        drive_e: f64,
        drive_c: f64,
        g: f64,
        rabi_eb: f64,
        rabi_bc: f64,
    ) -> Result<Self> {
        let params = Self { omega_e, omega_c, omega_mode, drive_e, drive_c, g, rabi_eb, rabi_bc };
        params.validate()?;
        Ok(params)
    }

    /// Parameters fixed by their rotating-frame content. Lab frequencies are
    /// filled in with a reference frame satisfying `ω_e > ω_c > 0` and the
    /// matching condition; they only matter for [`lab_hamiltonian`].
    pub fn from_detunings(delta_e: f64, delta_c: f64, g: f64, rabi_eb: f64, rabi_bc: f64) -> Result<Self> {
        let scale = delta_e.abs().max(delta_c.abs()).max(1.0);
        let omega_mode = 10.0 * scale;
        let drive_c = 20.0 * scale;
        let drive_e = drive_c + omega_mode;
        Self::new(drive_e + delta_e, drive_c + delta_c, omega_mode, drive_e, drive_c, g, rabi_eb, rabi_bc)
    }

    /// Like [`ModelParams::from_detunings`], with `Δ_c` chosen so that the
    /// mixing angle equals `theta`.
    pub fn from_mixing_angle(delta_e: f64, theta: f64, g: f64, rabi_eb: f64, rabi_bc: f64) -> Result<Self> {
        Self::from_detunings(delta_e, delta_c_for_mixing_angle(theta, rabi_bc)?, g, rabi_eb, rabi_bc)
    }

    pub fn delta_e(&self) -> f64 {
        self.omega_e - self.drive_e
    }

    pub fn delta_c(&self) -> f64 {
        self.omega_c - self.drive_c
    }

    /// `Ω_e − Ω_c − ω`.
    pub fn matching_mismatch(&self) -> f64 {
        self.drive_e - self.drive_c - self.omega_mode
    }

    pub fn check_matching(&self) -> Result<()> {
        let scale = self.drive_e.abs().max(self.drive_c.abs()).max(self.omega_mode.abs()).max(1.0);
        let mismatch = self.matching_mismatch();
        if mismatch.abs() > MATCHING_TOL * scale {
            return Err(Error::MatchingCondition { mismatch });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_e", self.omega_e),
            ("omega_c", self.omega_c),
            ("omega_mode", self.omega_mode),
            ("drive_e", self.drive_e),
            ("drive_c", self.drive_c),
            ("g", self.g),
            ("rabi_eb", self.rabi_eb),
            ("rabi_bc", self.rabi_bc),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite, got {value}") });
            }
        }
        if !(self.omega_e > self.omega_c && self.omega_c > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_e",
                reason: format!("require omega_e > omega_c > 0, got {} and {}", self.omega_e, self.omega_c),
            });
        }
        self.check_matching()
    }
}

/// `Δ_c = 2λ cot θ`, the detuning that produces mixing angle `theta`.
pub fn delta_c_for_mixing_angle(theta: f64, rabi_bc: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::InvalidParameter { name: "theta", reason: format!("must lie in (0, pi), got {theta}") });
    }
    if rabi_bc == 0.0 {
        return Err(Error::InvalidParameter {
            name: "rabi_bc",
            reason: "a mixing angle other than 0 or pi needs a nonzero lambda".into(),
        });
    }
    Ok(2.0 * rabi_bc * theta.cos() / theta.sin())
}

/// Atom slots in the dressed frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DressedLevel {
    Minus,
    Plus,
    Excited,
}

impl DressedLevel {
    pub fn index(self) -> usize {
        match self {
            DressedLevel::Minus => 0,
            DressedLevel::Plus => 1,
            DressedLevel::Excited => 2,
        }
    }
}

/// Which displaced-boson shift diverges when the mixing angle sits at an end
/// of `[0, π]` (no `|b⟩ ↔ |c⟩` drive) or when `g = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    /// `θ = π`: `tan(θ/2)` diverges.
    PlusDisplacement,
    /// `θ = 0`: `cot(θ/2)` diverges.
    MinusDisplacement,
    /// `g = 0`: both shifts are ill-defined.
    BothDisplacements,
}

/// Derived quantities of the dressed frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedParams {
    pub delta_e: f64,
    pub delta_c: f64,
    pub g: f64,
    pub rabi_eb: f64,
    pub rabi_bc: f64,
    /// Mixing angle `θ = atan2(2λ, Δ_c)`, in `(0, π)` for `λ > 0`.
    pub theta: f64,
    /// Dressed frequency `ω′ = √(λ² + Δ_c²/4)`.
    pub omega_prime: f64,
    /// `ε_± = Δ_c/2 ± ω′`.
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// `g(θ) = g cos(θ/2)`, coupling of the mode to `|e⟩ ↔ |+⟩`.
    pub coupling_plus: f64,
    /// `G(θ) = g sin(θ/2)`, coupling of the mode to `|e⟩ ↔ |−⟩`.
    pub coupling_minus: f64,
    /// `ξ = (G/g) tan(θ/2)`, with `A = a + ξ`.
    pub displacement_plus: f64,
    /// `ζ = (G/g) cot(θ/2)`, with `B = a − ζ`.
    pub displacement_minus: f64,
    /// `Δ_± = Δ_e − ε_±`.
    pub detuning_plus: f64,
    pub detuning_minus: f64,
    /// Stark shift `Ω_A = g(θ)²/Δ_+` of the `|+⟩` branch.
    pub stark_plus: f64,
    /// Stark shift `Ω_B = G(θ)²/Δ_−` of the `|−⟩` branch.
    pub stark_minus: f64,
    /// `Γ = g(θ)G(θ)(2Δ_e − Δ_c) / (2Δ_+Δ_−)`, coefficient of the
    /// `|+⟩⟨−|` term after elimination.
    pub cross_coupling: f64,
    /// Drive on the mode in the `|−⟩` branch, `f = Ω_B ζ = G(θ) G cos(θ/2) / Δ_−`.
    pub driving_force: f64,
    pub singularity: Option<Singularity>,
}

impl DressedParams {
    pub fn half_angle(&self) -> (f64, f64) {
        let half = 0.5 * self.theta;
        (half.cos(), half.sin())
    }

    /// Coefficients `(Γ₁, Γ₂, Γ₃, Γ₄)` of the analytic generator
    /// `S = Γ₁ A|e⟩⟨+| + Γ₂ B|e⟩⟨−| + Γ₃ A†|+⟩⟨e| + Γ₄ B†|−⟩⟨e|`.
    ///
    /// The `|−⟩` pair carries a positive `Γ₂` because the interaction term is
    /// `−G(θ) B |e⟩⟨−|`.
    pub fn generator_coefficients(&self) -> [f64; 4] {
        let g1 = -self.coupling_plus / self.detuning_plus;
        let g2 = self.coupling_minus / self.detuning_minus;
        [g1, g2, -g1, -g2]
    }

    /// `(Γ₁, Γ₂)` with the mean-detuning denominators `ε ± Δ`, where
    /// `ε = (Δ_c + Δ_e)/2` and `Δ = ½√((Δ_c − Δ_e)² + 4λ²)`. These do not solve
    /// `H₁ + [H₀, S] = 0` in general; kept for comparison.
    pub fn generator_coefficients_mean_detuning(&self) -> (f64, f64) {
        let eps = 0.5 * (self.delta_c + self.delta_e);
        let big_delta = 0.5 * ((self.delta_c - self.delta_e).powi(2) + 4.0 * self.rabi_bc.powi(2)).sqrt();
        (-self.coupling_plus / (eps + big_delta), -self.coupling_minus / (eps - big_delta))
    }

    /// `g(θ)G(θ)/Δ_−`. Agrees with [`DressedParams::driving_force`] only when
    /// `G = g`.
    pub fn driving_force_coupling_product(&self) -> f64 {
        self.coupling_plus * self.coupling_minus / self.detuning_minus
    }

    /// Smallest `|Δ_±|`.
    pub fn min_detuning(&self) -> f64 {
        self.detuning_plus.abs().min(self.detuning_minus.abs())
    }

    /// Largest of `|g(θ)|, |G(θ)|`.
    pub fn max_coupling(&self) -> f64 {
        self.coupling_plus.abs().max(self.coupling_minus.abs())
    }
}

/// Dressed-frame quantities for `params`.
///
/// Fails when the mixing angle is undefined or a dressed branch is resonant
/// with `|e⟩`. A vanishing `λ` (or `g`) is allowed but flagged through
/// [`DressedParams::singularity`] and a log warning, since one of the
/// displacements then diverges.
pub fn dressed_params(params: &ModelParams) -> Result<DressedParams> {
    let delta_e = params.delta_e();
    let delta_c = params.delta_c();
    let (g, rabi_eb, rabi_bc) = (params.g, params.rabi_eb, params.rabi_bc);
    if rabi_bc == 0.0 && delta_c == 0.0 {
        return Err(Error::UndefinedMixingAngle);
    }
    let theta = (2.0 * rabi_bc).atan2(delta_c);
    let omega_prime = rabi_bc.hypot(0.5 * delta_c);
    let eps_plus = 0.5 * delta_c + omega_prime;
    let eps_minus = 0.5 * delta_c - omega_prime;
    let detuning_plus = delta_e - eps_plus;
    let detuning_minus = delta_e - eps_minus;
    let scale = delta_e.abs().max(eps_plus.abs()).max(eps_minus.abs()).max(f64::MIN_POSITIVE);
    if detuning_plus.abs() <= 1e-12 * scale {
        return Err(Error::Resonance { which: "Delta_plus", value: detuning_plus });
    }
    if detuning_minus.abs() <= 1e-12 * scale {
        return Err(Error::Resonance { which: "Delta_minus", value: detuning_minus });
    }

    let (cos_h, sin_h) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let coupling_plus = g * cos_h;
    let coupling_minus = g * sin_h;
    let ratio = rabi_eb / g;
    let displacement_plus = ratio * sin_h / cos_h;
    let displacement_minus = ratio * cos_h / sin_h;

    let singularity = if g == 0.0 {
        Some(Singularity::BothDisplacements)
    } else if rabi_bc == 0.0 && delta_c > 0.0 {
        Some(Singularity::MinusDisplacement)
    } else if rabi_bc == 0.0 {
        Some(Singularity::PlusDisplacement)
    } else {
        None
    };
    if let Some(s) = singularity {
        warn!("dressed parameters are singular ({s:?}): theta = {theta}, displacements ({displacement_plus}, {displacement_minus})");
    }

    Ok(DressedParams {
        delta_e,
        delta_c,
        g,
        rabi_eb,
        rabi_bc,
        theta,
        omega_prime,
        eps_plus,
        eps_minus,
        coupling_plus,
        coupling_minus,
        displacement_plus,
        displacement_minus,
        detuning_plus,
        detuning_minus,
        stark_plus: coupling_plus * coupling_plus / detuning_plus,
        stark_minus: coupling_minus * coupling_minus / detuning_minus,
        cross_coupling: coupling_plus * coupling_minus * (2.0 * delta_e - delta_c)
            / (2.0 * detuning_plus * detuning_minus),
        driving_force: coupling_minus * rabi_eb * cos_h / detuning_minus,
        singularity,
    })
}

struct FieldOps {
    a: Operator,
    adag: Operator,
    id: Operator,
    num: Operator,
}

impl FieldOps {
    fn new(space: &HilbertSpace) -> Result<Self> {
        let a = boson_annihilation(space.fock_dim())?;
        Ok(Self {
            adag: a.adjoint(),
            a,
            id: Operator::identity(space.fock_dim()),
            num: number_operator(space.fock_dim())?,
        })
    }
}

fn atom(to: usize, from: usize) -> Operator {
    Operator::atom_transition(to, from)
}

/// `H(t) = ω_e|e⟩⟨e| + ω_c|c⟩⟨c| + ω a†a
///        + (g|e⟩⟨c|a + G e^{iΩ_e t}|b⟩⟨e| + λ e^{iΩ_c t}|b⟩⟨c| + h.c.)`.
pub fn lab_hamiltonian(params: &ModelParams, space: &HilbertSpace, t: f64) -> Result<Operator> {
    let f = FieldOps::new(space)?;
    let (b, c, e) = (AtomLevel::B.index(), AtomLevel::C.index(), AtomLevel::E.index());
    let mut h = embed(&atom(e, e).scale_real(params.omega_e), &f.id, space)?;
    h += embed(&atom(c, c).scale_real(params.omega_c), &f.id, space)?;
    h += embed(&Operator::identity(3), &f.num.scale_real(params.omega_mode), space)?;

    let drive_e = C64::from_polar(params.rabi_eb, params.drive_e * t);
    let drive_c = C64::from_polar(params.rabi_bc, params.drive_c * t);
    let coupling = embed(&atom(e, c).scale_real(params.g), &f.a, space)?
        + embed(&atom(b, e).scale(drive_e), &f.id, space)?
        + embed(&atom(b, c).scale(drive_c), &f.id, space)?;
    Ok(h + &coupling + coupling.adjoint())
}

/// Diagonal generator `D = Ω_e|e⟩⟨e| + Ω_c|c⟩⟨c| + ω a†a` of the frame change
/// `W(t) = exp(−iDt)`.
pub fn frame_generator(params: &ModelParams, space: &HilbertSpace) -> Result<Operator> {
    let f = FieldOps::new(space)?;
    let (c, e) = (AtomLevel::C.index(), AtomLevel::E.index());
    Ok(embed(&atom(e, e).scale_real(params.drive_e), &f.id, space)?
        + embed(&atom(c, c).scale_real(params.drive_c), &f.id, space)?
        + embed(&Operator::identity(3), &f.num.scale_real(params.omega_mode), space)?)
}

/// `W(t) = exp[−it(Ω_e|e⟩⟨e| + Ω_c|c⟩⟨c| + ω a†a)]`, evaluated entrywise on
/// the diagonal.
pub fn frame_unitary(params: &ModelParams, space: &HilbertSpace, t: f64) -> Result<Operator> {
    let d = frame_generator(params, space)?;
    let n = d.dim();
    let m = CMatrix::from_fn(n, n, |i, j| {
        if i == j { C64::from_polar(1.0, -d.get(i, i).re * t) } else { C64::new(0.0, 0.0) }
    });
    Operator::from_matrix(m)
}

/// Analytic `dW/dt = −iD W(t)`.
pub fn frame_unitary_derivative(params: &ModelParams, space: &HilbertSpace, t: f64) -> Result<Operator> {
    let d = frame_generator(params, space)?;
    let w = frame_unitary(params, space, t)?;
    Ok((d * w).scale(C64::new(0.0, -1.0)))
}

/// Time-independent rotating-frame Hamiltonian
/// `Δ_c|c⟩⟨c| + Δ_e|e⟩⟨e| + (g|e⟩⟨c|a + G|e⟩⟨b| + λ|b⟩⟨c| + h.c.)`.
pub fn rotating_hamiltonian(params: &ModelParams, space: &HilbertSpace) -> Result<Operator> {
    params.check_matching()?;
    let f = FieldOps::new(space)?;
    let (b, c, e) = (AtomLevel::B.index(), AtomLevel::C.index(), AtomLevel::E.index());
    let diag = embed(&atom(c, c).scale_real(params.delta_c()), &f.id, space)?
        + embed(&atom(e, e).scale_real(params.delta_e()), &f.id, space)?;
    let coupling = embed(&atom(e, c).scale_real(params.g), &f.a, space)?
        + embed(&atom(e, b).scale_real(params.rabi_eb), &f.id, space)?
        + embed(&atom(b, c).scale_real(params.rabi_bc), &f.id, space)?;
    Ok(diag + &coupling + coupling.adjoint())
}

/// The classically driven `{|b⟩, |c⟩}` block `Δ_c|c⟩⟨c| + λ(|c⟩⟨b| + |b⟩⟨c|)`
/// as a 2×2 operator in the order (b, c).
pub fn drive_subhamiltonian(params: &ModelParams) -> Operator {
    let mut m = CMatrix::zeros(2, 2);
    m[(1, 1)] = C64::new(params.delta_c(), 0.0);
    m[(0, 1)] = C64::new(params.rabi_bc, 0.0);
    m[(1, 0)] = C64::new(params.rabi_bc, 0.0);
    Operator::from_matrix(m).expect("2x2")
}

/// Unitary `R ⊗ 1` whose atom columns are `|−⟩, |+⟩, |e⟩` written in the bare
/// `(b, c, e)` basis:
/// `|+⟩ = cos(θ/2)|c⟩ + sin(θ/2)|b⟩`, `|−⟩ = −sin(θ/2)|c⟩ + cos(θ/2)|b⟩`.
pub fn dressed_rotation(dp: &DressedParams, space: &HilbertSpace) -> Result<Operator> {
    let (cos_h, sin_h) = dp.half_angle();
    let (b, c, e) = (AtomLevel::B.index(), AtomLevel::C.index(), AtomLevel::E.index());
    let (minus, plus, exc) =
        (DressedLevel::Minus.index(), DressedLevel::Plus.index(), DressedLevel::Excited.index());
    let mut r = CMatrix::zeros(3, 3);
    r[(b, minus)] = C64::new(cos_h, 0.0);
    r[(c, minus)] = C64::new(-sin_h, 0.0);
    r[(b, plus)] = C64::new(sin_h, 0.0);
    r[(c, plus)] = C64::new(cos_h, 0.0);
    r[(e, exc)] = C64::new(1.0, 0.0);
    embed(&Operator::from_matrix(r)?, &Operator::identity(space.fock_dim()), space)
}

/// Field operators `C_+ = g(θ) A = g cos(θ/2) a + G sin(θ/2)` and
/// `C_− = G(θ) B = g sin(θ/2) a − G cos(θ/2)`.
///
/// Working with these products keeps every operator finite when `g` or one
/// of the half-angle functions vanishes.
pub fn coupling_operators(dp: &DressedParams, space: &HilbertSpace) -> Result<(Operator, Operator)> {
    let f = FieldOps::new(space)?;
    let (cos_h, sin_h) = dp.half_angle();
    let plus = f.a.scale_real(dp.coupling_plus) + f.id.scale_real(dp.rabi_eb * sin_h);
    let minus = f.a.scale_real(dp.coupling_minus) - f.id.scale_real(dp.rabi_eb * cos_h);
    Ok((plus, minus))
}

/// Displaced boson operators `A = a + ξ` and `B = a − ζ`.
pub fn displaced_operators(dp: &DressedParams, space: &HilbertSpace) -> Result<(Operator, Operator)> {
    let f = FieldOps::new(space)?;
    Ok((
        &f.a + f.id.scale_real(dp.displacement_plus),
        &f.a - f.id.scale_real(dp.displacement_minus),
    ))
}

/// Free and interaction parts of the rotating Hamiltonian in dressed
/// coordinates.
#[derive(Clone, Debug)]
pub struct DressedHamiltonian {
    /// `Δ_e|e⟩⟨e| + ε_+|+⟩⟨+| + ε_−|−⟩⟨−|`.
    pub free: Operator,
    /// `g(θ) A|e⟩⟨+| − G(θ) B|e⟩⟨−| + h.c.`.
    pub interaction: Operator,
}

impl DressedHamiltonian {
    pub fn total(&self) -> Operator {
        &self.free + &self.interaction
    }
}

pub fn dressed_hamiltonian(params: &ModelParams, space: &HilbertSpace) -> Result<DressedHamiltonian> {
    let dp = dressed_params(params)?;
    let f = FieldOps::new(space)?;
    let (minus, plus, exc) =
        (DressedLevel::Minus.index(), DressedLevel::Plus.index(), DressedLevel::Excited.index());
    let free = embed(&atom(exc, exc).scale_real(dp.delta_e), &f.id, space)?
        + embed(&atom(plus, plus).scale_real(dp.eps_plus), &f.id, space)?
        + embed(&atom(minus, minus).scale_real(dp.eps_minus), &f.id, space)?;
    let (c_plus, c_minus) = coupling_operators(&dp, space)?;
    let half = embed(&atom(exc, plus), &c_plus, space)? - embed(&atom(exc, minus), &c_minus, space)?;
    let interaction = &half + half.adjoint();
    Ok(DressedHamiltonian { free, interaction })
}

/// Analytic effective Hamiltonians after eliminating `|e⟩`, in dressed
/// coordinates.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonians {
    /// Field operator `Δ_e + Ω_A A A† + Ω_B B B†` acting while the atom is in
    /// `|e⟩`.
    pub excited_field: Operator,
    /// `excited_field ⊗ |e⟩⟨e|`.
    pub excited: Operator,
    /// `(ε_+ − Ω_A A†A)|+⟩⟨+| + (ε_− − Ω_B B†B)|−⟩⟨−|
    ///  + Γ[A†B|+⟩⟨−| + B†A|−⟩⟨+|]`.
    pub bc: Operator,
    /// `bc` without the `Γ` cross term.
    pub bc_rwa: Operator,
    /// Field operator `−Ω_B a†a + f (a + a†)` for the atom held in `|−⟩`.
    pub minus: Operator,
}

impl EffectiveHamiltonians {
    /// `bc_rwa + excited`, the block-diagonal effective dynamics.
    pub fn rwa_total(&self) -> Operator {
        &self.bc_rwa + &self.excited
    }

    /// `bc + excited`, the full second-order effective Hamiltonian.
    pub fn total(&self) -> Operator {
        &self.bc + &self.excited
    }
}

pub fn effective_hamiltonians(params: &ModelParams, space: &HilbertSpace) -> Result<EffectiveHamiltonians> {
    let dp = dressed_params(params)?;
    let f = FieldOps::new(space)?;
    let (minus, plus, exc) =
        (DressedLevel::Minus.index(), DressedLevel::Plus.index(), DressedLevel::Excited.index());
    let (c_plus, c_minus) = coupling_operators(&dp, space)?;
    let (dplus, dminus) = (dp.detuning_plus, dp.detuning_minus);

    let excited_field = f.id.scale_real(dp.delta_e)
        + (&c_plus * c_plus.adjoint()).scale_real(1.0 / dplus)
        + (&c_minus * c_minus.adjoint()).scale_real(1.0 / dminus);
    let excited = embed(&atom(exc, exc), &excited_field, space)?;

    let plus_branch = f.id.scale_real(dp.eps_plus) - (c_plus.adjoint() * &c_plus).scale_real(1.0 / dplus);
    let minus_branch = f.id.scale_real(dp.eps_minus) - (c_minus.adjoint() * &c_minus).scale_real(1.0 / dminus);
    let bc_rwa = embed(&atom(plus, plus), &plus_branch, space)? + embed(&atom(minus, minus), &minus_branch, space)?;

    // Γ A†B = ½(1/Δ_+ + 1/Δ_−) C_+† C_−
    let cross_field = (c_plus.adjoint() * &c_minus).scale_real(0.5 * (1.0 / dplus + 1.0 / dminus));
    let cross = embed(&atom(plus, minus), &cross_field, space)?;
    let bc = &bc_rwa + &cross + cross.adjoint();

    let minus_field = f.num.scale_real(-dp.stark_minus) + (&f.a + &f.adag).scale_real(dp.driving_force);

    Ok(EffectiveHamiltonians { excited_field, excited, bc, bc_rwa, minus: minus_field })
}
