//! Flat `key = value` run configuration.
//!
//! | key                  | default         | meaning                                   |
//! |----------------------|-----------------|-------------------------------------------|
//! | `n_max`              | `10`            | degree cap for exact checks (≥ 6)         |
//! | `beta`               | `0.5,1`         | boost rapidities                          |
//! | `kappa`              | `0,1,2,3,4`     | chiralities                               |
//! | `kappa_prime`        | `0,1,2`         | dual-factor chiralities                   |
//! | `epsilon`            | `3/7`           | massless energy, a positive rational      |
//! | `tolerance`          | `1e-8`          | float tolerance                           |
//! | `cutoff`             | `40`            | series and trace cutoff                   |
//! | `boost_nmax`         | `24`            | degree cap of the expm oracle             |
//! | `boost_input_degree` | `1`             | largest input degree in the Gauss check   |
//! | `out`                | `out`           | output directory                          |
//! | `threads`            | `0`             | worker threads, 0 for one per core        |
//! | `eps6`               | `-1`            | sign multiplying ε₀₁₂₃₄₅                  |
//! | `hs_convention`      | `orthonormal`   | `orthonormal` or `monomial`               |
//!
//! Lines starting with `#` are comments.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use su22osc::fockaux::HsConvention;
use su22osc::oscrep::Conventions;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n_max: u32,
    pub beta_list: Vec<f64>,
    pub kappa_list: Vec<i64>,
    pub kappa_prime_list: Vec<i64>,
    pub epsilon: BigRational,
    pub tolerance: f64,
    pub cutoff: u32,
    pub boost_n_max: u32,
    pub boost_input_degree: u32,
    pub output_dir: PathBuf,
    pub threads: usize,
    pub conventions: Conventions,
    pub hs_convention: HsConvention,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_max: 10,
            beta_list: vec![0.5, 1.0],
            kappa_list: (0..=4).collect(),
            kappa_prime_list: (0..=2).collect(),
            epsilon: BigRational::new(3.into(), 7.into()),
            tolerance: 1e-8,
            cutoff: 40,
            boost_n_max: 24,
            boost_input_degree: 1,
            output_dir: PathBuf::from("out"),
            threads: 0,
            conventions: Conventions::default(),
            hs_convention: HsConvention::OrthonormalWeighted,
        }
    }
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| anyhow::anyhow!("{key}: cannot parse {s:?}")))
        .collect()
}

fn scalar<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse::<T>().map_err(|_| anyhow::anyhow!("{key}: cannot parse {v:?}"))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n_max" => self.n_max = scalar(key, value)?,
            "beta" => self.beta_list = list(key, value)?,
            "kappa" => self.kappa_list = list(key, value)?,
            "kappa_prime" => self.kappa_prime_list = list(key, value)?,
            "epsilon" => self.epsilon = scalar(key, value)?,
            "tolerance" => self.tolerance = scalar(key, value)?,
            "cutoff" => self.cutoff = scalar(key, value)?,
            "boost_nmax" => self.boost_n_max = scalar(key, value)?,
            "boost_input_degree" => self.boost_input_degree = scalar(key, value)?,
            "out" => self.output_dir = PathBuf::from(value.trim()),
            "threads" => self.threads = scalar(key, value)?,
            "eps6" => self.conventions.eps6 = scalar(key, value)?,
            "hs_convention" => {
                self.hs_convention = match value.trim() {
                    "orthonormal" => HsConvention::OrthonormalWeighted,
                    "monomial" => HsConvention::MonomialWeighted,
                    other => bail!("hs_convention: expected orthonormal or monomial, got {other:?}"),
                }
            }
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').with_context(|| format!("line {}: expected key = value", i + 1))?;
            cfg.set(k.trim(), v).with_context(|| format!("line {}", i + 1))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 6 {
            bail!("n_max must be at least 6, got {}", self.n_max);
        }
        if !(self.tolerance > 0.0) {
            bail!("tolerance must be positive");
        }
        if self.epsilon <= BigRational::from_integer(0.into()) {
            bail!("epsilon must be positive");
        }
        if self.conventions.eps6.abs() != 1 {
            bail!("eps6 must be 1 or -1");
        }
        if self.kappa_list.iter().chain(&self.kappa_prime_list).any(|k| *k < 0) {
            bail!("chiralities must be non-negative");
        }
        if self.beta_list.is_empty() {
            bail!("beta list is empty");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let c = RunConfig::parse("# demo\nn_max = 8\nbeta = 0.25, 2\nepsilon = 1/2\nhs_convention = monomial\n").unwrap();
        assert_eq!(c.n_max, 8);
        assert_eq!(c.beta_list, vec![0.25, 2.0]);
        assert_eq!(c.epsilon, BigRational::new(1.into(), 2.into()));
        assert_eq!(c.hs_convention, HsConvention::MonomialWeighted);
        assert_eq!(c.cutoff, 40);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("nmax 8").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        let mut c = RunConfig { n_max: 4, ..RunConfig::default() };
        assert!(c.validate().is_err());
        c.n_max = 6;
        c.set("epsilon", "-1/3").unwrap();
        assert!(c.validate().is_err());
    }
}
