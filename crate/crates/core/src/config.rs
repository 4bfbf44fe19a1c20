//! Experiment configuration: a TOML file with one section per concern.
//!
//! ```toml
//! seed = 7
//!
//! [kernel]
//! kind = "free_field"
//! mass = 1.0
//!
//! [balls]
//! source = "random"
//! dim = 2
//! count = 10
//! lo = [0.5, -1.0]
//! hi = [2.0, 1.0]
//! radius_min = 0.1
//! radius_max = 0.4
//! seed = 3
//! ```

use crate::axioms::Functional;
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::io::read_balls_csv;
use crate::kernels::{KernelSpec, QuadratureConfig};
use crate::rng::RandomBalls;
use crate::transform::Transform;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum BallSource {
    Inline { balls: Vec<Ball> },
    Csv { path: PathBuf },
    Random(RandomBalls),
}

impl BallSource {
    pub fn load(&self, base: &Path) -> Result<Vec<Ball>> {
        match self {
            BallSource::Inline { balls } => Ok(balls.clone()),
            BallSource::Csv { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                read_balls_csv(BufReader::new(File::open(&p)?))
            }
            BallSource::Random(r) => r.generate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSection {
    pub n_samples: usize,
    pub bootstrap: usize,
    /// Also write samples as CSV.
    pub csv: bool,
}

impl Default for SampleSection {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            bootstrap: 1000,
            csv: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeSection {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub radii: Vec<f64>,
}

impl Default for ConvergeSection {
    fn default() -> Self {
        Self {
            x: vec![0.0, 0.0, 0.0],
            y: vec![1.0, 0.0, 0.0],
            radii: (1..=6).map(|k| 0.5f64.powi(k)).collect(),
        }
    }
}

/// Lattice of balls used by the entropy command; one entry per refinement level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntropySection {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub per_axis: Vec<usize>,
    pub radii: Vec<f64>,
    /// Geometric schedule from `eps_max` to `eps_min`.
    pub eps_max: f64,
    pub eps_min: f64,
    pub eps_points: usize,
}

impl Default for EntropySection {
    fn default() -> Self {
        Self {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
            per_axis: vec![5, 9, 17],
            radii: vec![0.2, 0.3, 0.4],
            eps_max: 2.0,
            eps_min: 0.05,
            eps_points: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionSection {
    pub count: usize,
    pub scale: f64,
    pub seed: u64,
}

impl Default for MotionSection {
    fn default() -> Self {
        Self {
            count: 10,
            scale: 2.0,
            seed: 1,
        }
    }
}

/// Random ball pairs inside a box, for metric comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquivalenceSection {
    pub reference: KernelSpec,
    pub pairs: usize,
    pub lo: f64,
    pub hi: f64,
    pub radius_min: f64,
    pub radius_max: f64,
    pub dim: usize,
    pub seed: u64,
}

impl Default for EquivalenceSection {
    fn default() -> Self {
        Self {
            reference: KernelSpec::White,
            pairs: 200,
            lo: -1.0,
            hi: 1.0,
            radius_min: 0.1,
            radius_max: 2.0,
            dim: 2,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub seed: u64,
    pub kernel: Option<KernelSpec>,
    pub balls: Option<BallSource>,
    pub transform: Option<Transform>,
    pub functionals: Option<Vec<Functional>>,
    pub subset: Option<Vec<usize>>,
    pub samples: SampleSection,
    pub quadrature: QuadratureConfig,
    pub converge: ConvergeSection,
    pub entropy: EntropySection,
    pub motions: MotionSection,
    pub equivalence: EquivalenceSection,
    /// Excluded from the config hash.
    pub output_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel.unwrap_or(KernelSpec::White)
    }

    /// SHA-256 of the settings that determine the outputs.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        c.threads = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let c = ExperimentConfig::from_toml(
            r#"
seed = 9
[kernel]
kind = "free_field"
mass = 2.0
[balls]
source = "inline"
balls = [{ center = [1.0, 0.0], radius = 0.5 }]
[transform]
kind = "power"
p = 3
[samples]
n_samples = 5000
"#,
        )
        .unwrap();
        assert_eq!(c.kernel(), KernelSpec::FreeField { mass: 2.0 });
        assert_eq!(c.transform, Some(Transform::Power { p: 3 }));
        assert_eq!(c.samples.n_samples, 5000);
        assert_eq!(c.samples.bootstrap, 1000);
        let balls = c.balls.unwrap().load(Path::new(".")).unwrap();
        assert_eq!(balls[0].radius(), 0.5);
    }

    #[test]
    fn rejects_invalid_ball() {
        let e = ExperimentConfig::from_toml("[balls]\nsource = \"inline\"\nballs = [{ center = [0.0], radius = -1.0 }]\n");
        assert!(e.is_err());
    }

    #[test]
    fn hash_ignores_output_location_and_threads() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig {
            output_dir: Some("elsewhere".into()),
            threads: Some(4),
            ..Default::default()
        };
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig { seed: 1, ..Default::default() };
        assert_ne!(a.hash(), c.hash());
    }
}
