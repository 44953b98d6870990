//! Length conditions, one function per table row family.
//!
//! Each row is transcribed as its literal arithmetic condition. Existential
//! parameters are enumerated exhaustively; lengths above `q+1` are kept apart
//! so they can be reported without entering the counts.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::constructions::ConstructionParams;
use crate::ff::numtheory::{divisors, gcd, prime_power};
use crate::ff::FieldCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Prior,
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusRule {
    pub id: &'static str,
    pub source: Source,
    pub citation: &'static str,
}

const fn prior(id: &'static str, citation: &'static str) -> CensusRule {
    CensusRule {
        id,
        source: Source::Prior,
        citation,
    }
}

const fn new(id: &'static str, citation: &'static str) -> CensusRule {
    CensusRule {
        id,
        source: Source::New,
        citation,
    }
}

pub const RULES: &[CensusRule] = &[
    prior("prior:GG-q+1", "q odd; n = q+1"),
    prior("prior:Yan-(n-1)|(q-1)", "q odd; (n-1) | (q-1), eta(1-n) = 1"),
    prior("prior:Yan-(n-2)|(q-1)", "q odd; (n-2) | (q-1), eta(2-n) = 1"),
    prior(
        "prior:GUE-3mod4",
        "q = r^s = 3 (mod 4); n-1 = p^m | (q-1), prime p = 3 (mod 4), m odd",
    ),
    prior(
        "prior:GUE-1mod4",
        "q = r^s, r = 1 (mod 4), s odd; n-1 = p^m | (q-1), m odd, prime p = 1 (mod 4)",
    ),
    prior("prior:Yan-lr-2l", "q = r^s, s >= 2; n = lr, l even, 2l | (r-1)"),
    prior(
        "prior:Yan-lr-(l-1)",
        "q = r^s, s >= 2; n = lr, l even, (l-1) | (r-1), eta(1-l) = 1",
    ),
    prior("prior:Yan-lr+1-l", "q = r^s, s >= 2; n = lr+1, l odd, l | (r-1), eta(l) = 1"),
    prior(
        "prior:Yan-lr+1-(l-1)",
        "q = r^s, s >= 2; n = lr+1, l odd, (l-1) | (r-1), eta(l-1) = eta(-1) = 1",
    ),
    prior("prior:JX-n<=r", "q = r^2; n <= r"),
    prior("prior:JX-2tr", "q = r^2, r = 3 (mod 4); n = 2tr, t <= (r-1)/2"),
    prior("prior:Yan-tr", "q = r^2; n = tr, t even, 1 <= t <= r"),
    prior("prior:Yan-tr+1", "q = r^2; n = tr+1, t odd, 1 <= t <= r"),
    prior("prior:Yan-n|(q-1)", "q = 1 (mod 4); n | (q-1), n < q-1"),
    prior("prior:JX-4^n", "q = 1 (mod 4); 4^n n^2 <= q"),
    prior("prior:Yan-p^r+1", "q = p^k; n = p^r + 1, r | k"),
    prior("prior:Yan-2p^e", "q = p^k; n = 2p^e, 1 <= e < k, eta(-1) = 1"),
    prior(
        "prior:LLL-tm",
        "q = r^2; n = tm, 1 <= t <= (r-1)/gcd(r-1,m), (q-1)/m even",
    ),
    prior(
        "prior:LLL-tm+1",
        "q = r^2; n = tm+1, tm odd, 1 <= t <= (r-1)/gcd(r-1,m), m | (q-1)",
    ),
    prior(
        "prior:LLL-tm+2",
        "q = r^2; n = tm+2, tm even, 1 <= t <= (r-1)/gcd(r-1,m), m | (q-1)",
    ),
    prior(
        "prior:LLL-2tp^e",
        "q = p^m; n = 2tp^e, 2t | (p-1), e < m, (q-1)/(2t) even",
    ),
    prior(
        "prior:FF-2tr^l",
        "q = p^m, m even; n = 2tr^l, r = p^s, s | m/2, 0 <= l <= m/s, 1 <= t <= (r-1)/2",
    ),
    prior(
        "prior:FF-(2t+1)r^l+1",
        "q = p^m, m even; n = (2t+1)r^l + 1, r = p^s, s | m/2, 0 <= l < m/s, 0 <= t <= (r-1)/2, or l = m/s, t = 0",
    ),
    prior("prior:FF-p^l+1", "q = p^m = 1 (mod 4); n = p^l + 1, 0 <= l <= m"),
    new(
        "new:T1i",
        "q = r^2; n = tm, 1 <= t <= (r+1)/gcd(r+1,m), (q-1)/m even",
    ),
    new(
        "new:T1ii",
        "q = r^2; n = tm+2, tm even, 1 <= t <= (r+1)/gcd(r+1,m), m | (q-1), not (t even, m even, r = 1 (mod 4))",
    ),
    new(
        "new:T2",
        "q = r^2; n = tm+1, tm odd, 2 <= t <= (r+1)/(2 gcd(r+1,m)), m | (q-1)",
    ),
    new(
        "new:T3i",
        "q = r^2; n = tm, 1 <= t <= s(r-1)/gcd(s(r-1),m), s even, s | m, (r+1)/s even, (q-1)/m even",
    ),
    new(
        "new:T3ii",
        "q = r^2; n = tm+2, 1 <= t <= s(r-1)/gcd(s(r-1),m), s even, s | m, s | r+1, m | (q-1)",
    ),
    new("new:T4", "q = p^(2s); n = p^(2e) + 1, 1 <= e <= s"),
    new(
        "new:T5",
        "q = p^(km); n = 2tp^(ke), 2t | (p^k-1), e <= m-1, (q-1)/(2t) even",
    ),
];

/// Lengths a single rule produces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleLengths {
    /// Even lengths in `[2, q+1]`.
    pub lengths: BTreeSet<u64>,
    /// Even lengths the row's conditions admit above `q+1`.
    pub beyond_ceiling: BTreeSet<u64>,
    /// First parameter tuple found for each length (new rows only).
    pub witnesses: BTreeMap<u64, ConstructionParams>,
}

pub(crate) struct Collector<'a> {
    ctx: &'a FieldCtx,
    q: u64,
    p: u64,
    d: u32,
    pub(crate) rules: BTreeMap<&'static str, RuleLengths>,
}

impl<'a> Collector<'a> {
    pub(crate) fn new(ctx: &'a FieldCtx) -> Self {
        Collector {
            ctx,
            q: ctx.order(),
            p: ctx.characteristic(),
            d: ctx.degree(),
            rules: RULES
                .iter()
                .map(|r| (r.id, RuleLengths::default()))
                .collect(),
        }
    }

    fn add(&mut self, id: &'static str, n: u64) {
        self.add_witnessed(id, n, None);
    }

    fn add_witnessed(&mut self, id: &'static str, n: u64, w: Option<ConstructionParams>) {
        if n < 2 || n % 2 != 0 {
            return;
        }
        let entry = self.rules.get_mut(id).expect("rule id is registered");
        if n > self.q + 1 {
            entry.beyond_ceiling.insert(n);
            return;
        }
        entry.lengths.insert(n);
        if let Some(w) = w {
            entry.witnesses.entry(n).or_insert(w);
        }
    }

    /// Quadratic character of the integer `x` read in `F_q`.
    fn eta(&self, x: i64) -> i8 {
        self.ctx.quadratic_character(self.ctx.from_int(x))
    }

    /// `q = r^s` for every `r = p^a` with `a | d`.
    fn decompositions(&self) -> Vec<(u64, u32)> {
        (1..=self.d)
            .filter(|a| self.d % a == 0)
            .map(|a| (self.p.pow(a), self.d / a))
            .collect()
    }

    fn sqrt_q(&self) -> Option<u64> {
        (self.d % 2 == 0).then(|| self.p.pow(self.d / 2))
    }

    pub(crate) fn prior_rows(&mut self) {
        let (q, p, d) = (self.q, self.p, self.d);
        let qm1 = q - 1;
        let qdivs = divisors(qm1);

        self.add("prior:GG-q+1", q + 1);
        for &x in &qdivs {
            // n - 1 = x
            if self.eta(-(x as i64)) == 1 {
                self.add("prior:Yan-(n-1)|(q-1)", x + 1);
            }
            // n - 2 = x
            if self.eta(-(x as i64)) == 1 {
                self.add("prior:Yan-(n-2)|(q-1)", x + 2);
            }
        }

        let prime_power_divisors: Vec<(u64, u64, u32)> = qdivs
            .iter()
            .filter_map(|&x| prime_power(x).map(|(pp, mm)| (x, pp, mm)))
            .collect();
        let decomps = self.decompositions();
        if q % 4 == 3 {
            for &(x, pp, mm) in &prime_power_divisors {
                if pp % 4 == 3 && mm % 2 == 1 {
                    self.add("prior:GUE-3mod4", x + 1);
                }
            }
        }
        if decomps.iter().any(|&(r, s)| r % 4 == 1 && s % 2 == 1) {
            for &(x, pp, mm) in &prime_power_divisors {
                if pp % 4 == 1 && mm % 2 == 1 {
                    self.add("prior:GUE-1mod4", x + 1);
                }
            }
        }

        for &(r, s) in &decomps {
            if s < 2 {
                continue;
            }
            let rdivs = divisors(r - 1);
            for &l in &rdivs {
                // l even with 2l | r-1
                if (r - 1) % (2 * l) == 0 && l % 2 == 0 {
                    self.add("prior:Yan-lr-2l", l * r);
                }
                if l % 2 == 1 && self.eta(l as i64) == 1 {
                    self.add("prior:Yan-lr+1-l", l * r + 1);
                }
                // l - 1 = divisor
                let l1 = l + 1;
                if l1 % 2 == 0 && self.eta(-(l as i64)) == 1 {
                    self.add("prior:Yan-lr-(l-1)", l1 * r);
                }
                if l1 % 2 == 1 && self.eta(l as i64) == 1 && self.eta(-1) == 1 {
                    self.add("prior:Yan-lr+1-(l-1)", l1 * r + 1);
                }
            }
        }

        if let Some(r) = self.sqrt_q() {
            for n in (2..=r).step_by(2) {
                self.add("prior:JX-n<=r", n);
            }
            if r % 4 == 3 {
                for t in 1..=(r - 1) / 2 {
                    self.add("prior:JX-2tr", 2 * t * r);
                }
            }
            for t in 1..=r {
                if t % 2 == 0 {
                    self.add("prior:Yan-tr", t * r);
                } else {
                    self.add("prior:Yan-tr+1", t * r + 1);
                }
            }
            for &m in &qdivs {
                let bound = (r - 1) / gcd(r - 1, m);
                for t in 1..=bound {
                    let tm = t * m;
                    if (qm1 / m) % 2 == 0 {
                        self.add("prior:LLL-tm", tm);
                    }
                    if tm % 2 == 1 {
                        self.add("prior:LLL-tm+1", tm + 1);
                    } else {
                        self.add("prior:LLL-tm+2", tm + 2);
                    }
                }
            }
        }

        if q % 4 == 1 {
            for &n in &qdivs {
                if n < qm1 {
                    self.add("prior:Yan-n|(q-1)", n);
                }
            }
            let mut n = 1u64;
            while 4u64.saturating_pow(n as u32).saturating_mul(n * n) <= q {
                self.add("prior:JX-4^n", n);
                n += 1;
            }
        }

        for rr in (1..=d).filter(|rr| d % rr == 0) {
            self.add("prior:Yan-p^r+1", p.pow(rr) + 1);
        }
        if self.eta(-1) == 1 {
            for e in 1..d {
                self.add("prior:Yan-2p^e", 2 * p.pow(e));
            }
        }
        for t in (1..p).filter(|t| (p - 1) % (2 * t) == 0) {
            if (qm1 / (2 * t)) % 2 == 0 {
                for e in 0..d {
                    self.add("prior:LLL-2tp^e", 2 * t * p.pow(e));
                }
            }
        }

        if d % 2 == 0 {
            for s in (1..=d / 2).filter(|s| (d / 2) % s == 0) {
                let r = p.pow(s);
                let top = d / s;
                for l in 0..=top {
                    let rl = r.pow(l);
                    for t in 1..=(r - 1) / 2 {
                        self.add("prior:FF-2tr^l", 2 * t * rl);
                    }
                    if l < top {
                        for t in 0..=(r - 1) / 2 {
                            self.add("prior:FF-(2t+1)r^l+1", (2 * t + 1) * rl + 1);
                        }
                    } else {
                        self.add("prior:FF-(2t+1)r^l+1", rl + 1);
                    }
                }
            }
        }
        if q % 4 == 1 {
            for l in 0..=d {
                self.add("prior:FF-p^l+1", p.pow(l) + 1);
            }
        }
    }

    pub(crate) fn new_rows(&mut self) {
        let (q, p, d) = (self.q, self.p, self.d);
        let qm1 = q - 1;
        if let Some(r) = self.sqrt_q() {
            for m in divisors(qm1) {
                let g = gcd(r + 1, m);
                for t in 1..=(r + 1) / g {
                    let tm = t * m;
                    if tm % 2 == 0 {
                        if (qm1 / m) % 2 == 0 {
                            self.add_witnessed(
                                "new:T1i",
                                tm,
                                Some(ConstructionParams::T1i { m, t }),
                            );
                        }
                        if !(t % 2 == 0 && m % 2 == 0 && r % 4 == 1) {
                            self.add_witnessed(
                                "new:T1ii",
                                tm + 2,
                                Some(ConstructionParams::T1ii { m, t }),
                            );
                        }
                    }
                }
                for t in 2..=(r + 1) / (2 * g) {
                    if (t * m) % 2 == 1 {
                        self.add_witnessed(
                            "new:T2",
                            t * m + 1,
                            Some(ConstructionParams::T2 { m, t }),
                        );
                    }
                }
                for s in divisors(m) {
                    if s % 2 != 0 || (r + 1) % s != 0 {
                        continue;
                    }
                    let sr = s * (r - 1);
                    let plain = ((r + 1) / s) % 2 == 0 && (qm1 / m) % 2 == 0;
                    for t in 1..=sr / gcd(sr, m) {
                        if plain {
                            self.add_witnessed(
                                "new:T3i",
                                t * m,
                                Some(ConstructionParams::T3i { m, t, s }),
                            );
                        }
                        self.add_witnessed(
                            "new:T3ii",
                            t * m + 2,
                            Some(ConstructionParams::T3ii { m, t, s }),
                        );
                    }
                }
            }
            for e in 1..=d / 2 {
                self.add_witnessed(
                    "new:T4",
                    p.pow(2 * e) + 1,
                    Some(ConstructionParams::T4 { e }),
                );
            }
        }
        for k in (1..=d).filter(|k| d % k == 0) {
            let pk = p.pow(k);
            for two_t in divisors(pk - 1) {
                if two_t % 2 != 0 || (qm1 / two_t) % 2 != 0 {
                    continue;
                }
                for e in 0..d / k {
                    self.add_witnessed(
                        "new:T5",
                        two_t * pk.pow(e),
                        Some(ConstructionParams::T5 { k, t: two_t / 2, e }),
                    );
                }
            }
        }
    }
}
