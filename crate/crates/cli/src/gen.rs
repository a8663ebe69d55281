//! Seeded random instances.

use fairdiv::{max_correlation, Error, Instance, Kind, Valuation, Value, DEFAULT_TABLE_LIMIT};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doc::{AdditiveDoc, InstanceDoc, Num};
use crate::CliError;

/// Resolution of the per-agent multipliers used for correlated instances.
const SCALE: i64 = 100;

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub agents: usize,
    pub items: usize,
    pub kind: Kind,
    pub max_value: u32,
    pub seed: u64,
    pub ordered: bool,
    /// Target correlation in `(0, 1]`.
    pub alpha: Option<Value>,
}

impl GenSpec {
    pub fn new(agents: usize, items: usize, kind: Kind, seed: u64) -> Self {
        GenSpec {
            agents,
            items,
            kind,
            max_value: 20,
            seed,
            ordered: false,
            alpha: None,
        }
    }
}

/// Magnitudes `|v_i(g)|` as integers, row per agent.
fn magnitudes(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let max = spec.max_value as i64;
    match &spec.alpha {
        None => (0..spec.agents)
            .map(|_| (0..spec.items).map(|_| rng.gen_range(0..=max)).collect())
            .collect(),
        Some(alpha) => {
            // A shared base scaled per agent by factors in [sqrt(α), 1]; the
            // ratio of two agents' values then stays within roughly α.
            let lo = (alpha.to_f64().unwrap_or(1.0).sqrt() * SCALE as f64).ceil() as i64;
            let lo = lo.clamp(1, SCALE);
            let base: Vec<i64> = (0..spec.items).map(|_| rng.gen_range(1..=max.max(1))).collect();
            (0..spec.agents)
                .map(|_| base.iter().map(|b| b * rng.gen_range(lo..=SCALE)).collect())
                .collect()
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<InstanceDoc, CliError> {
    if spec.agents == 0 {
        return Err(CliError::input("--agents must be positive"));
    }
    if spec.items > fairdiv::items::MAX_ITEMS {
        return Err(CliError::input(format!(
            "--items must be at most {}",
            fairdiv::items::MAX_ITEMS
        )));
    }
    if let Some(a) = &spec.alpha {
        if !a.is_positive() || *a > Value::one() {
            return Err(CliError::input("--alpha-correlated must lie in (0, 1]"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows = magnitudes(spec, &mut rng);
    let sign = if spec.kind == Kind::Goods { 1 } else { -1 };
    if spec.ordered {
        // Largest value first: the biggest goods, or the lightest chores.
        for r in rows.iter_mut() {
            if sign > 0 {
                r.sort_unstable_by(|a, b| b.cmp(a));
            } else {
                r.sort_unstable();
            }
        }
    }
    let values: Vec<Vec<Value>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Value::from_integer((sign * x).into())).collect())
        .collect();

    let (alpha_correlation, comment) = if let Some(target) = &spec.alpha {
        let subject = if spec.kind == Kind::Goods { "values" } else { "disutilities" };
        if spec.items > DEFAULT_TABLE_LIMIT {
            (
                Some(None),
                Some(format!(
                    "alpha_correlation not computed: more than {DEFAULT_TABLE_LIMIT} items"
                )),
            )
        } else {
            let magnitudes: Vec<Valuation<Value>> = values
                .iter()
                .map(|r| Valuation::additive(r.iter().map(|x| x.abs()).collect()))
                .collect::<Result<_, _>>()
                .map_err(CliError::from)?;
            let achieved = match max_correlation(&magnitudes, DEFAULT_TABLE_LIMIT) {
                Ok(a) => a,
                Err(Error::CorrelationViolation { .. }) => Value::zero(),
                Err(e) => return Err(e.into()),
            };
            (
                Some(Some(Num(achieved))),
                Some(format!(
                    "alpha_correlation is the exact max_correlation of the {subject}; requested {}/{}",
                    target.numer(),
                    target.denom()
                )),
            )
        }
    } else {
        (None, None)
    };

    let doc = InstanceDoc {
        agents: spec.agents,
        items: spec.items,
        kind: spec.kind.name(),
        valuations: AdditiveDoc {
            additive: values.iter().map(|r| r.iter().cloned().map(Num).collect()).collect(),
        },
        alpha_correlation,
        comment,
    };
    // Generated documents must always load.
    Instance::additive(spec.kind, values).map_err(CliError::from)?;
    Ok(doc)
}
