//! Parsers for comma-separated CLI lists.

use ansps::direction::SpectralRule;
use ansps::linesearch::NonmonotoneRule;
use ansps::problems::SyntheticSpec;
use ansps::sampling::SampleStrategy;

use crate::error::CliError;

fn items(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

/// `ansps`, `heur`, `full`; `r` is the adaptive growth factor.
pub fn strategies(list: &str, r: f64) -> Result<Vec<SampleStrategy>, CliError> {
    items(list)
        .map(|s| match s.to_ascii_lowercase().as_str() {
            "ansps" | "adaptive" => Ok(SampleStrategy::Adaptive { r }),
            "heur" => Ok(SampleStrategy::heuristic()),
            "full" => Ok(SampleStrategy::Full),
            other => Err(usage(format!("unknown strategy `{other}`"))),
        })
        .collect()
}

/// `bb1`, `bb2`, `abb`, `abbmin`, `const` or `const:VALUE`.
pub fn spectral_rules(list: &str) -> Result<Vec<SpectralRule>, CliError> {
    items(list)
        .map(|s| {
            let lower = s.to_ascii_lowercase();
            match lower.as_str() {
                "bb1" => Ok(SpectralRule::Bb1),
                "bb2" => Ok(SpectralRule::Bb2),
                "abb" => Ok(SpectralRule::Abb),
                "abbmin" => Ok(SpectralRule::abb_min()),
                "const" => Ok(SpectralRule::Constant(1.0)),
                other => match other.strip_prefix("const:") {
                    Some(v) => v
                        .parse()
                        .map(SpectralRule::Constant)
                        .map_err(|_| usage(format!("bad constant in `{s}`"))),
                    None => Err(usage(format!("unknown spectral rule `{s}`"))),
                },
            }
        })
        .collect()
}

/// `max`, `cca`, `mon`, `ada`.
pub fn nonmonotone_rules(list: &str) -> Result<Vec<NonmonotoneRule>, CliError> {
    items(list)
        .map(|s| match s.to_ascii_lowercase().as_str() {
            "max" => Ok(NonmonotoneRule::max()),
            "cca" => Ok(NonmonotoneRule::cca()),
            "mon" => Ok(NonmonotoneRule::Mon),
            "ada" => Ok(NonmonotoneRule::Ada),
            other => Err(usage(format!("unknown nonmonotone rule `{other}`"))),
        })
        .collect()
}

pub fn seeds(list: &str) -> Result<Vec<u64>, CliError> {
    items(list)
        .map(|s| s.parse().map_err(|_| usage(format!("bad seed `{s}`"))))
        .collect()
}

/// `n,N,seed`
pub fn synthetic(triple: &str) -> Result<SyntheticSpec, CliError> {
    let parts: Vec<&str> = triple.split(',').map(str::trim).collect();
    let [n, big_n, seed] = parts.as_slice() else {
        return Err(usage(format!("--synthetic expects n,N,seed, got `{triple}`")));
    };
    let bad = |what: &str| usage(format!("bad {what} in --synthetic `{triple}`"));
    let n: usize = n.parse().map_err(|_| bad("n"))?;
    let big_n: usize = big_n.parse().map_err(|_| bad("N"))?;
    let seed: u64 = seed.parse().map_err(|_| bad("seed"))?;
    if n == 0 || big_n == 0 {
        return Err(bad("size"));
    }
    Ok(SyntheticSpec::new(n, big_n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(
            strategies("ansps, heur,full", 1.2).unwrap(),
            vec![
                SampleStrategy::Adaptive { r: 1.2 },
                SampleStrategy::heuristic(),
                SampleStrategy::Full
            ]
        );
        assert_eq!(spectral_rules("bb1,abbmin,const:0.5").unwrap().len(), 3);
        assert_eq!(nonmonotone_rules("max,cca,mon,ada").unwrap().len(), 4);
        assert!(spectral_rules("").unwrap().is_empty());
        assert!(spectral_rules("bb3").is_err());
        assert!(nonmonotone_rules("wolfe").is_err());
        assert_eq!(seeds("1,2").unwrap(), vec![1, 2]);
    }

    #[test]
    fn synthetic_triple() {
        let s = synthetic("2,4,7").unwrap();
        assert_eq!((s.n_features, s.n_samples, s.seed), (2, 4, 7));
        assert!(synthetic("2,4").is_err());
        assert!(synthetic("0,4,1").is_err());
        assert!(synthetic("a,4,1").is_err());
    }
}
