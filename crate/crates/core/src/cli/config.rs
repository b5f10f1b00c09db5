//! Flat `key = value` run configuration.
//!
//! ```text
//! # free electrons on [0, 100)
//! hamiltonian.kind = free        # free | kp | file
//! grid.length = 100
//! grid.n = 256
//! solver.mu = 10, 100            # one value for `solve`, a list for `sweep`
//! solver.n_electrons = 10
//! solver.lambda = 50
//! solver.r = 50
//! output.dir = out/free
//! ```
//!
//! Relative paths are resolved against the directory holding the config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::hamiltonian::{Grid1D, HamiltonianModel, KronigPenneyParams};
use crate::solver::{SolverParams, DEFAULT_MAX_ITER, DEFAULT_TOL};

const KNOWN_KEYS: &[&str] = &[
    "hamiltonian.kind",
    "hamiltonian.path",
    "kp.depth",
    "kp.width",
    "kp.wells",
    "kp.centers",
    "grid.length",
    "grid.n",
    "solver.mu",
    "solver.lambda",
    "solver.r",
    "solver.n_electrons",
    "solver.tol",
    "solver.max_iter",
    "solver.record_every",
    "solver.initial",
    "reference.P",
    "reference.Q",
    "reference.R",
    "reference.b",
    "reference.d",
    "output.dir",
    "diagnostics.sites",
    "diagnostics.ritz_k",
];

/// Largest accepted `grid.n`. Dense storage and cubic eigensolves make
/// anything beyond this impractical, and the cap keeps malformed configs from
/// exhausting memory.
pub const MAX_GRID_POINTS: usize = 16_384;

/// Paths of a known saddle point `(P*, Q*, R*, b*, d*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePaths {
    pub p: PathBuf,
    pub q: PathBuf,
    pub r: PathBuf,
    pub b: PathBuf,
    pub d: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub hamiltonian: HamiltonianModel,
    pub grid: Grid1D,
    pub mu: Vec<f64>,
    pub lambda: f64,
    pub r: f64,
    pub n_electrons: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub record_every: usize,
    pub output_dir: PathBuf,
    pub initial: Option<PathBuf>,
    pub reference: Option<ReferencePaths>,
    pub sites: Option<Vec<usize>>,
    pub ritz_k: Option<usize>,
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, CliError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let kv = parse_pairs(text)?;
        let mut cfg = Fields { kv, base };

        let length = cfg.f64_or("grid.length", 100.0)?;
        let n = cfg.usize_or("grid.n", 256)?;
        if n > MAX_GRID_POINTS {
            return Err(CliError::field("grid.n", format!("{n} exceeds the limit {MAX_GRID_POINTS}")));
        }
        let grid = Grid1D::new(length, n).map_err(|e| CliError::field("grid", e.to_string()))?;

        let kind = cfg.str_or("hamiltonian.kind", "free");
        let hamiltonian = match kind.as_str() {
            "free" => HamiltonianModel::FreeLaplacian,
            "kp" => {
                let depth = cfg.f64_or("kp.depth", KronigPenneyParams::DEFAULT_DEPTH)?;
                let width = cfg.f64_or("kp.width", KronigPenneyParams::DEFAULT_WIDTH)?;
                let wells = cfg.usize_or("kp.wells", KronigPenneyParams::DEFAULT_WELLS)?;
                if wells > n {
                    return Err(CliError::field("kp.wells", format!("{wells} wells on {n} grid points")));
                }
                let mut kp = KronigPenneyParams::evenly_spaced(length, depth, width, wells);
                if let Some(centers) = cfg.f64_list("kp.centers")? {
                    kp.centers = centers;
                }
                kp.validate(&grid).map_err(|e| CliError::field("kp", e.to_string()))?;
                HamiltonianModel::ModifiedKronigPenney(kp)
            }
            "file" => HamiltonianModel::FromFile(cfg.existing_path("hamiltonian.path")?.ok_or_else(
                || CliError::field("hamiltonian.path", "required when hamiltonian.kind = file"),
            )?),
            other => {
                return Err(CliError::field(
                    "hamiltonian.kind",
                    format!("unknown kind `{other}` (expected free, kp or file)"),
                ))
            }
        };

        let mu = cfg
            .f64_list("solver.mu")?
            .ok_or_else(|| CliError::field("solver.mu", "required"))?;
        if mu.is_empty() {
            return Err(CliError::field("solver.mu", "empty list"));
        }
        if let Some(bad) = mu.iter().find(|m| !(**m > 0.0)) {
            return Err(CliError::field("solver.mu", format!("must be positive, got {bad}")));
        }

        let lambda = cfg.positive("solver.lambda", 1.0)?;
        let r = cfg.positive("solver.r", 1.0)?;
        let tol = cfg.positive("solver.tol", DEFAULT_TOL)?;
        let n_electrons = cfg
            .f64_opt("solver.n_electrons")?
            .ok_or_else(|| CliError::field("solver.n_electrons", "required"))?;
        if !(n_electrons > 0.0 && n_electrons.is_finite()) {
            return Err(CliError::field(
                "solver.n_electrons",
                format!("must be positive, got {n_electrons}"),
            ));
        }
        let max_iter = cfg.usize_or("solver.max_iter", DEFAULT_MAX_ITER)?;
        if max_iter == 0 {
            return Err(CliError::field("solver.max_iter", "must be at least 1"));
        }
        let record_every = cfg.usize_or("solver.record_every", 1)?;
        if record_every == 0 {
            return Err(CliError::field("solver.record_every", "must be at least 1"));
        }
        let initial = cfg.existing_path("solver.initial")?;

        let ref_keys = ["reference.P", "reference.Q", "reference.R", "reference.b", "reference.d"];
        let given: Vec<Option<PathBuf>> = ref_keys
            .iter()
            .map(|k| cfg.existing_path(k))
            .collect::<Result<_, _>>()?;
        let reference = match given.iter().filter(|p| p.is_some()).count() {
            0 => None,
            5 => {
                let mut it = given.into_iter().map(Option::unwrap);
                Some(ReferencePaths {
                    p: it.next().unwrap(),
                    q: it.next().unwrap(),
                    r: it.next().unwrap(),
                    b: it.next().unwrap(),
                    d: it.next().unwrap(),
                })
            }
            _ => {
                let missing = ref_keys
                    .iter()
                    .zip(&given)
                    .find(|(_, p)| p.is_none())
                    .map(|(k, _)| *k)
                    .unwrap();
                return Err(CliError::field(missing, "all five reference matrices are required"));
            }
        };

        let output_dir = cfg.path_or("output.dir", "out");
        let sites = cfg.usize_list("diagnostics.sites")?;
        let ritz_k = cfg.usize_opt("diagnostics.ritz_k")?;

        Ok(Self {
            hamiltonian,
            grid,
            mu,
            lambda,
            r,
            n_electrons,
            tol,
            max_iter,
            record_every,
            output_dir,
            initial,
            reference,
            sites,
            ritz_k,
        })
    }

    pub fn solver_params(&self, mu: f64) -> SolverParams {
        SolverParams {
            mu,
            lambda: self.lambda,
            r: self.r,
            n_electrons: self.n_electrons,
            max_iter: self.max_iter,
            tol: self.tol,
            record_every: self.record_every,
        }
    }

    /// Electron count as an integer, for the diagnostics that select states.
    pub fn occupied_states(&self) -> Result<usize, CliError> {
        let n = self.n_electrons;
        if n.fract() != 0.0 {
            return Err(CliError::field(
                "solver.n_electrons",
                format!("must be an integer for this command, got {n}"),
            ));
        }
        Ok(n as usize)
    }
}

fn parse_pairs(text: &str) -> Result<BTreeMap<String, (usize, String)>, CliError> {
    let mut kv = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            field: format!("line {}", no + 1),
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::field(key, format!("unknown key on line {}", no + 1)));
        }
        if kv.insert(key.to_string(), (no + 1, value.trim().to_string())).is_some() {
            return Err(CliError::field(key, format!("duplicate key on line {}", no + 1)));
        }
    }
    Ok(kv)
}

struct Fields<'a> {
    kv: BTreeMap<String, (usize, String)>,
    base: &'a Path,
}

impl Fields<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.kv.get(key).map(|(_, v)| v.as_str())
    }

    fn str_or(&mut self, key: &str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::field(key, format!("not a number: `{v}`")))
            })
            .transpose()
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let v = self.f64_or(key, default)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::field(key, format!("must be positive and finite, got {v}")));
        }
        Ok(v)
    }

    fn usize_opt(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::field(key, format!("not a nonnegative integer: `{v}`")))
            })
            .transpose()
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<f64>()
                            .map_err(|_| CliError::field(key, format!("not a number: `{s}`")))
                    })
                    .collect()
            })
            .transpose()
    }

    fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|_| CliError::field(key, format!("not an index: `{s}`")))
                    })
                    .collect()
            })
            .transpose()
    }

    fn resolve(&self, v: &str) -> PathBuf {
        let p = PathBuf::from(v);
        if p.is_absolute() {
            p
        } else {
            self.base.join(p)
        }
    }

    fn path_or(&self, key: &str, default: &str) -> PathBuf {
        self.resolve(self.raw(key).unwrap_or(default))
    }

    fn existing_path(&self, key: &str) -> Result<Option<PathBuf>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => {
                let p = self.resolve(v);
                if !p.is_file() {
                    return Err(CliError::field(key, format!("file not found: {}", p.display())));
                }
                Ok(Some(p))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(text: &str) -> String {
        match RunConfig::parse(text, Path::new(".")) {
            Err(CliError::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_and_lists() {
        let cfg = RunConfig::parse(
            "solver.mu = 10, 100 , inf\nsolver.n_electrons = 10 # comment\n",
            Path::new("/tmp/x"),
        )
        .unwrap();
        assert_eq!(cfg.mu, vec![10.0, 100.0, f64::INFINITY]);
        assert_eq!(cfg.grid.points(), 256);
        assert_eq!(cfg.grid.length(), 100.0);
        assert_eq!(cfg.hamiltonian, HamiltonianModel::FreeLaplacian);
        assert_eq!(cfg.output_dir, PathBuf::from("/tmp/x/out"));
        assert_eq!(cfg.lambda, 1.0);
        assert_eq!(cfg.tol, DEFAULT_TOL);
        assert_eq!(cfg.max_iter, DEFAULT_MAX_ITER);
    }

    #[test]
    fn kp_defaults_place_wells_evenly() {
        let cfg = RunConfig::parse(
            "hamiltonian.kind = kp\nsolver.mu = 100\nsolver.n_electrons = 15\n",
            Path::new("."),
        )
        .unwrap();
        match cfg.hamiltonian {
            HamiltonianModel::ModifiedKronigPenney(kp) => {
                assert_eq!(kp.wells(), 10);
                assert!((kp.centers[0] - 100.0 / 11.0).abs() < 1e-12);
                assert_eq!(kp.well_depth, 1.0);
                assert_eq!(kp.width, 3.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(field_of("solver.mu = 0\nsolver.n_electrons = 1"), "solver.mu");
        assert_eq!(field_of("solver.mu = -3\nsolver.n_electrons = 1"), "solver.mu");
        assert_eq!(field_of("solver.n_electrons = 1"), "solver.mu");
        assert_eq!(field_of("solver.mu = 1"), "solver.n_electrons");
        assert_eq!(field_of("solver.mu = x\nsolver.n_electrons = 1"), "solver.mu");
        assert_eq!(field_of("solver.mu = 1\nsolver.n_electrons = 1\nsolver.lambda = 0"), "solver.lambda");
        assert_eq!(field_of("solver.mu = 1\nsolver.n_electrons = 1\nbogus = 2"), "bogus");
        assert_eq!(field_of("solver.mu = 1\nsolver.mu = 2\nsolver.n_electrons = 1"), "solver.mu");
        assert_eq!(field_of("solver.mu = 1\nsolver.n_electrons = 1\ngrid.n = 2"), "grid");
        assert_eq!(
            field_of("solver.mu = 1\nsolver.n_electrons = 1\nhamiltonian.kind = file"),
            "hamiltonian.path"
        );
        assert_eq!(
            field_of("solver.mu = 1\nsolver.n_electrons = 1\nhamiltonian.kind = file\nhamiltonian.path = /no/such"),
            "hamiltonian.path"
        );
        assert_eq!(field_of("solver.mu = 1\nsolver.n_electrons = 1\nhamiltonian.kind = wat"), "hamiltonian.kind");
        assert_eq!(field_of("just text"), "line 1");
        assert_eq!(field_of("solver.mu = 1\nsolver.n_electrons = 1\ngrid.n = 99999999999"), "grid.n");
        assert_eq!(
            field_of("solver.mu = 1\nsolver.n_electrons = 1\nhamiltonian.kind = kp\nkp.wells = 999999999999"),
            "kp.wells"
        );
    }
}
