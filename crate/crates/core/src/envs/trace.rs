use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReplayMode {
    /// Round `t` replays row `(t - 1) mod len`.
    Cyclic,
    /// Each round draws a row uniformly at random.
    #[default]
    SampleWithReplacement,
}

/// Recorded (reward, cost) pairs of one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceArmSpec {
    rows: Vec<(f64, f64)>,
    mode: ReplayMode,
}

impl TraceArmSpec {
    pub fn new(rows: Vec<(f64, f64)>, mode: ReplayMode) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::domain("trace arm has no rows"));
        }
        for (k, &(r, c)) in rows.iter().enumerate() {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::domain(format!("trace row {}: reward {r} outside [0, 1]", k + 1)));
            }
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::domain(format!("trace row {}: cost {c} must be >= 0", k + 1)));
            }
        }
        Ok(Self { rows, mode })
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    pub fn mode(&self) -> ReplayMode {
        self.mode
    }

    /// Row for 1-based `round`.
    pub fn sample<R: Rng + ?Sized>(&self, round: u64, rng: &mut R) -> (f64, f64) {
        match self.mode {
            ReplayMode::Cyclic => {
                let k = (round.saturating_sub(1) % self.rows.len() as u64) as usize;
                self.rows[k]
            }
            ReplayMode::SampleWithReplacement => self.rows[rng.random_range(0..self.rows.len())],
        }
    }
}

/// Reads a trace CSV (`arm,reward,cost`, 1-based arms) into rows per arm.
pub fn read_trace_csv(path: &Path) -> Result<BTreeMap<usize, Vec<(f64, f64)>>> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .quoting(false)
        .from_path(path)
        .map_err(|e| Error::Load {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    if header != ["arm", "reward", "cost"] {
        return Err(parse_err(1, format!("expected header `arm,reward,cost`, got `{}`", header.join(","))));
    }

    let mut arms: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |k: usize, name: &str| -> Result<&str> {
            record
                .get(k)
                .map(str::trim)
                .ok_or_else(|| parse_err(line, format!("missing `{name}` column")))
        };
        let arm: usize = field(0, "arm")?
            .parse()
            .map_err(|e| parse_err(line, format!("bad arm index: {e}")))?;
        if arm == 0 {
            return Err(parse_err(line, "arm indices are 1-based".into()));
        }
        let reward: f64 = field(1, "reward")?
            .parse()
            .map_err(|e| parse_err(line, format!("bad reward: {e}")))?;
        let cost: f64 = field(2, "cost")?
            .parse()
            .map_err(|e| parse_err(line, format!("bad cost: {e}")))?;
        if !(0.0..=1.0).contains(&reward) {
            return Err(parse_err(line, format!("reward {reward} outside [0, 1]")));
        }
        if !(cost.is_finite() && cost >= 0.0) {
            return Err(parse_err(line, format!("cost {cost} must be >= 0")));
        }
        arms.entry(arm).or_default().push((reward, cost));
    }
    Ok(arms)
}

/// Loads replayable arms `1..=n_arms` from a trace CSV.
pub fn trace_env_load(path: &Path, n_arms: usize, mode: ReplayMode) -> Result<Vec<TraceArmSpec>> {
    let mut rows = read_trace_csv(path)?;
    (1..=n_arms)
        .map(|arm| {
            let arm_rows = rows.remove(&arm).ok_or_else(|| Error::Load {
                path: path.to_path_buf(),
                message: format!("no rows for arm {arm}"),
            })?;
            TraceArmSpec::new(arm_rows, mode)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::io::Write;

    fn write_csv(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn cyclic_replay() {
        let f = write_csv("arm,reward,cost\n1,0.1,0.5\n1,0.2,0.6\n1,0.3,0.7\n");
        let arms = trace_env_load(f.path(), 1, ReplayMode::Cyclic).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rewards: Vec<f64> = (1..=6).map(|t| arms[0].sample(t, &mut rng).0).collect();
        assert_eq!(rewards, [0.1, 0.2, 0.3, 0.1, 0.2, 0.3]);
    }

    #[test]
    fn reward_out_of_range_names_the_line() {
        let f = write_csv("arm,reward,cost\n1,0.5,0.5\n1,1.2,0.5\n");
        match trace_env_load(f.path(), 1, ReplayMode::Cyclic) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("1.2"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_arm_is_a_load_error() {
        let f = write_csv("arm,reward,cost\n1,0.5,0.5\n3,0.5,0.5\n");
        assert!(matches!(
            trace_env_load(f.path(), 3, ReplayMode::Cyclic),
            Err(Error::Load { .. })
        ));
    }

    #[test]
    fn malformed_rows() {
        let f = write_csv("arm,reward,cost\n1,abc,0.5\n");
        assert!(matches!(trace_env_load(f.path(), 1, ReplayMode::Cyclic), Err(Error::Parse { line: 2, .. })));
        let f = write_csv("arm,reward,cost\n0,0.5,0.5\n");
        assert!(matches!(trace_env_load(f.path(), 1, ReplayMode::Cyclic), Err(Error::Parse { .. })));
        let f = write_csv("arm,cost,reward\n1,0.5,0.5\n");
        assert!(matches!(trace_env_load(f.path(), 1, ReplayMode::Cyclic), Err(Error::Parse { line: 1, .. })));
        let f = write_csv("arm,reward,cost\n1,0.5,-1\n");
        assert!(matches!(trace_env_load(f.path(), 1, ReplayMode::Cyclic), Err(Error::Parse { .. })));
    }

    #[test]
    fn resampling_stays_within_rows() {
        let arm = TraceArmSpec::new(vec![(0.1, 1.0), (0.9, 2.0)], ReplayMode::SampleWithReplacement).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = [false; 2];
        for t in 1..100 {
            let (r, _) = arm.sample(t, &mut rng);
            seen[usize::from(r > 0.5)] = true;
        }
        assert_eq!(seen, [true, true]);
    }
}
