use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::scalar::Scalar;
use crate::valuation::{is_cancelable, ordered_valuation, OrderingPermutation, Valuation};

/// Whether items are desirable (non-negative values) or undesirable
/// (non-positive values, i.e. disutility `d = -v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Goods,
    Chores,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Goods => "goods",
            Kind::Chores => "chores",
        }
    }
}

/// A fair-division instance: `n` agents, `m` items and one valuation per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    kind: Kind,
    num_items: usize,
    valuations: Vec<Valuation<T>>,
}

impl<T: Scalar> Instance<T> {
    /// Validates shape and sign consistency.
    pub fn new(kind: Kind, valuations: Vec<Valuation<T>>) -> Result<Self> {
        let Some(first) = valuations.first() else {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        };
        let num_items = first.num_items();
        let additive = matches!(first, Valuation::Additive(_));
        for (i, v) in valuations.iter().enumerate() {
            if v.num_items() != num_items {
                return Err(Error::InvalidInstance(format!(
                    "agent {i} values {} items, agent 0 values {num_items}",
                    v.num_items()
                )));
            }
            if matches!(v, Valuation::Additive(_)) != additive {
                return Err(Error::InvalidInstance(
                    "valuations must be all additive or all tables".into(),
                ));
            }
            if let Some(s) = v.sign_violation(kind == Kind::Goods) {
                let detail = match kind {
                    Kind::Goods => format!("negative value on {s:?} in a goods instance"),
                    Kind::Chores => format!("positive value on {s:?} in a chores instance"),
                };
                return Err(Error::SignViolation { agent: i, detail });
            }
        }
        Ok(Instance {
            kind,
            num_items,
            valuations,
        })
    }

    pub fn goods(valuations: Vec<Valuation<T>>) -> Result<Self> {
        Self::new(Kind::Goods, valuations)
    }

    pub fn chores(valuations: Vec<Valuation<T>>) -> Result<Self> {
        Self::new(Kind::Chores, valuations)
    }

    /// Additive instance from a row-per-agent value matrix.
    pub fn additive(kind: Kind, rows: Vec<Vec<T>>) -> Result<Self> {
        let valuations = rows
            .into_iter()
            .map(Valuation::additive)
            .collect::<Result<Vec<_>>>()?;
        Self::new(kind, valuations)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn num_agents(&self) -> usize {
        self.valuations.len()
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn all_items(&self) -> ItemSet {
        ItemSet::full(self.num_items)
    }

    pub fn valuation(&self, agent: usize) -> &Valuation<T> {
        &self.valuations[agent]
    }

    pub fn valuations(&self) -> &[Valuation<T>] {
        &self.valuations
    }

    pub fn is_additive(&self) -> bool {
        matches!(self.valuations[0], Valuation::Additive(_))
    }

    /// Value of `set` to `agent` (negative for chores).
    pub fn value(&self, agent: usize, set: ItemSet) -> T {
        self.valuations[agent].value(set)
    }

    /// Every agent values items in the same order: `v_i({g}) >= v_i({g+1})`.
    pub fn check_ordered(&self) -> Result<()> {
        for (agent, v) in self.valuations.iter().enumerate() {
            if let Some(item) = v.order_violation() {
                return Err(Error::NotOrdered { agent, item });
            }
        }
        Ok(())
    }

    pub fn is_ordered(&self) -> bool {
        self.check_ordered().is_ok()
    }

    /// Verifies cancelability of table valuations within `limit` items.
    /// Additive valuations are cancelable by construction. Returns `false`
    /// when a table was too large to check.
    pub fn check_cancelable(&self, limit: usize) -> Result<bool> {
        if self.is_additive() {
            return Ok(true);
        }
        if self.num_items > limit {
            return Ok(false);
        }
        for (agent, v) in self.valuations.iter().enumerate() {
            if let Valuation::Table(t) = v {
                if let Err(w) = is_cancelable(t) {
                    return Err(Error::NotCancelable {
                        agent,
                        s: w.s,
                        t: w.t,
                        g: w.g,
                    });
                }
            }
        }
        Ok(true)
    }

    /// The instance with every valuation replaced by its ordered valuation,
    /// together with each agent's relabeling.
    pub fn ordered(&self) -> (Instance<T>, Vec<OrderingPermutation>) {
        let (valuations, perms) = self.valuations.iter().map(ordered_valuation).unzip();
        (
            Instance {
                kind: self.kind,
                num_items: self.num_items,
                valuations,
            },
            perms,
        )
    }
}
