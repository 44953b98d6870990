//! Census of even lengths `n <= q+1` for which a known construction gives an
//! MDS self-dual code over `F_q`.

mod rules;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

pub use rules::{CensusRule, RuleLengths, Source, RULES};

use crate::constructions::construct;
use crate::ff::numtheory::prime_power;
use crate::ff::{make_field, FieldCtx, FieldError};
use crate::verify::check_self_dual;

/// Largest `q` a census runs for unless told otherwise.
pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("q = {0} is even")]
    EvenQ(u64),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {q} exceeds the census budget of {budget}")]
    BudgetExceeded { q: u64, budget: u64 },
    #[error("length {n} claimed by {rule} was not realized: {detail}")]
    SpotCheckFailed {
        n: u64,
        rule: String,
        detail: String,
    },
    #[error("{rule} claims n = {n} = 2 (mod 4) over q = 3 (mod 4)")]
    ForbiddenLength { rule: String, n: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub fn rule(id: &str) -> Option<&'static CensusRule> {
    RULES.iter().find(|r| r.id == id)
}

/// Per-rule lengths for `F_q`.
#[derive(Debug, Clone)]
pub struct Census {
    q: u64,
    rules: BTreeMap<&'static str, RuleLengths>,
}

impl Census {
    pub fn new(q: u64) -> Result<Self, CensusError> {
        Self::with_budget(q, DEFAULT_BUDGET)
    }

    pub fn with_budget(q: u64, budget: u64) -> Result<Self, CensusError> {
        let ctx = census_field(q, budget)?;
        let mut c = rules::Collector::new(&ctx);
        c.prior_rows();
        c.new_rows();
        let census = Census { q, rules: c.rules };
        census.check_forbidden()?;
        Ok(census)
    }

    fn check_forbidden(&self) -> Result<(), CensusError> {
        if self.q % 4 != 3 {
            return Ok(());
        }
        for (id, r) in &self.rules {
            if let Some(&n) = r.lengths.iter().find(|&&n| n % 4 == 2) {
                return Err(CensusError::ForbiddenLength {
                    rule: id.to_string(),
                    n,
                });
            }
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rule_lengths(&self, id: &str) -> Option<&RuleLengths> {
        self.rules.get(id)
    }

    fn union_of(
        &self,
        source: Option<Source>,
        field: fn(&RuleLengths) -> &BTreeSet<u64>,
    ) -> BTreeSet<u64> {
        RULES
            .iter()
            .filter(|r| source.is_none_or(|s| r.source == s))
            .flat_map(|r| field(&self.rules[r.id]).iter().copied())
            .collect()
    }

    pub fn prior(&self) -> BTreeSet<u64> {
        self.union_of(Some(Source::Prior), |r| &r.lengths)
    }

    pub fn new_lengths(&self) -> BTreeSet<u64> {
        self.union_of(Some(Source::New), |r| &r.lengths)
    }

    pub fn union(&self) -> BTreeSet<u64> {
        self.union_of(None, |r| &r.lengths)
    }

    /// Lengths rows admit above `q+1`, which no MDS code can have.
    pub fn beyond_ceiling(&self, source: Option<Source>) -> BTreeSet<u64> {
        self.union_of(source, |r| &r.beyond_ceiling)
    }

    /// Build and verify a witness for every `(rule, n)` with `n <= bound`.
    pub fn spot_check(&self, bound: u64) -> Result<BTreeMap<u64, String>, CensusError> {
        let mut out = BTreeMap::new();
        if bound == 0 {
            return Ok(out);
        }
        let ctx = census_field(self.q, u64::MAX)?;
        for r in RULES.iter().filter(|r| r.source == Source::New) {
            for (&n, params) in self.rules[r.id].witnesses.range(..=bound) {
                let fail = |detail: String| CensusError::SpotCheckFailed {
                    n,
                    rule: r.id.to_string(),
                    detail,
                };
                let (art, _) =
                    construct(&ctx, params).map_err(|e| fail(format!("{params}: {e}")))?;
                if art.length() as u64 != n {
                    return Err(fail(format!("{params} has length {}", art.length())));
                }
                if !check_self_dual(&art).map_err(|e| fail(e.to_string()))? {
                    return Err(fail(format!("{params} is not self-dual")));
                }
                out.insert(n, "ok".to_string());
            }
        }
        Ok(out)
    }
}

fn census_field(q: u64, budget: u64) -> Result<FieldCtx, CensusError> {
    if q % 2 == 0 {
        return Err(CensusError::EvenQ(q));
    }
    let (p, d) = prime_power(q).ok_or(CensusError::NotPrimePower(q))?;
    if q > budget {
        return Err(CensusError::BudgetExceeded { q, budget });
    }
    Ok(make_field(p, d)?)
}

pub fn prior_lengths(q: u64) -> Result<BTreeSet<u64>, CensusError> {
    Ok(Census::new(q)?.prior())
}

pub fn new_lengths(q: u64) -> Result<BTreeSet<u64>, CensusError> {
    Ok(Census::new(q)?.new_lengths())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub q: u64,
    pub prior: Vec<u64>,
    pub new: Vec<u64>,
    pub prior_count: usize,
    pub new_count: usize,
    pub union_count: usize,
    pub per_rule: BTreeMap<String, Vec<u64>>,
    /// Lengths above `q+1` admitted by a row's literal conditions; not counted.
    pub beyond_ceiling: BTreeMap<String, Vec<u64>>,
    pub spot_checks: BTreeMap<u64, String>,
}

pub fn census_report(q: u64, spot_check_bound: u64) -> Result<CensusReport, CensusError> {
    let census = Census::new(q)?;
    report(&census, spot_check_bound)
}

pub fn report(census: &Census, spot_check_bound: u64) -> Result<CensusReport, CensusError> {
    let spot_checks = census.spot_check(spot_check_bound)?;
    let prior: Vec<u64> = census.prior().into_iter().collect();
    let new: Vec<u64> = census.new_lengths().into_iter().collect();
    let per_rule = RULES
        .iter()
        .map(|r| {
            (
                r.id.to_string(),
                census.rules[r.id].lengths.iter().copied().collect(),
            )
        })
        .collect();
    let beyond_ceiling = RULES
        .iter()
        .filter(|r| !census.rules[r.id].beyond_ceiling.is_empty())
        .map(|r| {
            (
                r.id.to_string(),
                census.rules[r.id].beyond_ceiling.iter().copied().collect(),
            )
        })
        .collect();
    Ok(CensusReport {
        q: census.q,
        prior_count: prior.len(),
        new_count: new.len(),
        union_count: census.union().len(),
        prior,
        new,
        per_rule,
        beyond_ceiling,
        spot_checks,
    })
}
