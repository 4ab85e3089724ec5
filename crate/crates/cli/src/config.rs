use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use qcs_core::dtseries::{EulerForm, MotiveFile, MotiveSource, Twist};
use qcs_core::quiver::{cyclic_completion, parse_quiver, DimensionVector, QuiverWithRelations, VarLayout};
use qcs_core::repvar::fp::is_prime;
use qcs_core::repvar::{CentralCharge, DEFAULT_BUDGET};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TwistKind {
    /// Commutative product.
    Plain,
    /// Product twisted by the antisymmetric part of the Euler form.
    QuantumTorus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EulerKind {
    /// Euler form of the completed quiver.
    Completed,
    /// Euler form of the quiver with relations.
    RelationComplex,
    /// Symmetrization of the completed-quiver form.
    Symmetrized,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Quiver description (TOML).
    #[arg(long, short, global = true, env = "QCS_INPUT")]
    pub input: Option<PathBuf>,
    /// Dimension vector such as `1,1,1`; repeatable.
    #[arg(long = "dim", short, global = true, env = "QCS_DIM", value_delimiter = ';')]
    pub dims: Vec<DimensionVector>,
    /// Primes for point counts, comma separated.
    #[arg(long, short, global = true, env = "QCS_PRIMES", value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Truncation bound N on the total degree of series.
    #[arg(long, short = 'N', global = true, env = "QCS_DEGREE", default_value_t = 2)]
    pub degree: u32,
    /// Central charge `re:im,re:im,...`, one pair per node.
    #[arg(long, global = true, env = "QCS_CHARGE")]
    pub charge: Option<String>,
    /// Worker threads for point counting; 0 uses all cores.
    #[arg(long, short, global = true, env = "QCS_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, short, global = true, env = "QCS_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum number of enumerated candidates per count.
    #[arg(long, short, global = true, env = "QCS_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Closed-form motives (JSON) used instead of interpolation.
    #[arg(long, global = true, env = "QCS_MOTIVES")]
    pub motives: Option<PathBuf>,
    /// Product rule for series division and ordered products.
    #[arg(long, global = true, env = "QCS_TWIST", value_enum, default_value_t = TwistKind::Plain)]
    pub twist: TwistKind,
    #[arg(long, global = true, env = "QCS_EULER", value_enum, default_value_t = EulerKind::Completed)]
    pub euler: EulerKind,
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        if self.budget == 0 {
            bail!("--budget must be at least 1");
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            bail!("--primes: {p} is not a prime");
        }
        Ok(())
    }

    pub fn quiver(&self) -> Result<QuiverWithRelations> {
        let path = self.input.as_ref().context("--input is required")?;
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_quiver(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn dims(&self, qr: &QuiverWithRelations) -> Result<Vec<DimensionVector>> {
        if self.dims.is_empty() {
            bail!("--dim is required");
        }
        for d in &self.dims {
            qr.quiver.check_dim(d)?;
        }
        Ok(self.dims.clone())
    }

    pub fn primes_or(&self, default: &[u64]) -> Vec<u64> {
        if self.primes.is_empty() {
            default.to_vec()
        } else {
            self.primes.clone()
        }
    }

    pub fn charge(&self, nodes: usize) -> Result<CentralCharge> {
        let text = self.charge.as_ref().context("--charge is required")?;
        let z: CentralCharge = text.parse()?;
        if z.len() != nodes {
            bail!("--charge has {} entries for {nodes} nodes", z.len());
        }
        Ok(z)
    }

    pub fn euler_form(&self, qr: &QuiverWithRelations) -> EulerForm {
        let pinned = EulerForm::completed_quiver(&cyclic_completion(qr));
        match self.euler {
            EulerKind::Completed => pinned,
            EulerKind::RelationComplex => EulerForm::relation_complex(qr),
            EulerKind::Symmetrized => pinned.symmetrized(),
        }
    }

    pub fn twist(&self, euler: &EulerForm) -> Twist {
        match self.twist {
            TwistKind::Plain => Twist::Plain,
            TwistKind::QuantumTorus => Twist::QuantumTorus(euler.clone()),
        }
    }

    /// Closed motives from `--motives`, otherwise interpolation at `--primes`
    /// or at enough small primes for every dimension vector up to `--degree`.
    pub fn motive_source(&self, qr: &QuiverWithRelations) -> Result<MotiveSource> {
        if let Some(path) = &self.motives {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file: MotiveFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            return Ok(MotiveSource::from_file(&file)?);
        }
        let primes = if self.primes.is_empty() {
            let mut needed = 1;
            for d in DimensionVector::all_up_to(qr.quiver.node_count(), self.degree) {
                needed = needed.max(VarLayout::new(&qr.quiver, &d)?.len() + 1);
            }
            (2u64..).filter(|&p| is_prime(p)).take(needed).collect()
        } else {
            self.primes.clone()
        };
        Ok(MotiveSource::Interpolated { primes, budget: self.budget })
    }
}
