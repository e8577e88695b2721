use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::table::{inverse_column, word_columns, CosetTable};
use crate::fp::{Presentation, Word};

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Relator-based (Haselgrove–Leech–Trotter) with lookahead.
    #[default]
    Hlt,
    /// Definition-driven with deduction processing.
    Felsch,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hlt" => Ok(Strategy::Hlt),
            "felsch" => Ok(Strategy::Felsch),
            _ => Err(format!("unknown strategy `{s}` (expected hlt or felsch)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumLimits {
    /// Cosets alive at once (table capacity).
    pub max_live: usize,
    /// Cosets ever defined.
    pub max_total: usize,
    pub time_budget: Option<Duration>,
}

/// Cosets that may be defined over a run, per unit of table capacity.
const TOTAL_PER_LIVE: usize = 16;

impl Default for EnumLimits {
    fn default() -> Self {
        Self::with_max_cosets(2_000_000)
    }
}

impl EnumLimits {
    /// Table capacity `n`; at most `16n` cosets defined in total.
    pub fn with_max_cosets(n: usize) -> Self {
        EnumLimits {
            max_live: n,
            max_total: n.saturating_mul(TOTAL_PER_LIVE),
            time_budget: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnumOptions {
    pub strategy: Strategy,
    pub limits: EnumLimits,
    /// Re-check inverse consistency of the table after every deduction
    /// and every coincidence batch. Slow.
    pub debug_checks: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    LiveCosets,
    TotalCosets,
    Time,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum EnumStatus {
    Completed,
    LimitExceeded { limit: LimitKind },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumStats {
    pub defined: usize,
    pub coincidences: usize,
    pub deductions: usize,
    pub max_live: usize,
    pub compactions: usize,
    pub lookaheads: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumOutcome {
    #[serde(flatten)]
    pub status: EnumStatus,
    pub index: Option<usize>,
    pub stats: EnumStats,
    #[serde(skip)]
    pub table: Option<CosetTable>,
}

impl EnumOutcome {
    pub fn is_complete(&self) -> bool {
        self.status == EnumStatus::Completed
    }
}

/// Raised by `define` when the table is full; never leaves the table in
/// an inconsistent state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Full,
    Limit(LimitKind),
}

struct Enumerator {
    ncols: usize,
    inv: Vec<usize>,
    table: Vec<u32>,
    parent: Vec<u32>,
    rows: usize,
    live: usize,
    relators: Vec<Vec<u32>>,
    /// Felsch only: cyclic conjugates of relators and their inverses,
    /// grouped by first letter.
    conjugates: Vec<Vec<Vec<u32>>>,
    deductions: Vec<(u32, u32)>,
    track_deductions: bool,
    queue: Vec<u32>,
    limits: EnumLimits,
    started: Instant,
    stats: EnumStats,
    debug_checks: bool,
}

impl Enumerator {
    fn new(p: &Presentation, opts: &EnumOptions) -> Self {
        let ncols = 2 * p.num_generators();
        let mut relators: Vec<Vec<u32>> = p
            .relators()
            .iter()
            .map(|r| word_columns(&r.cyclic_reduce()))
            .filter(|r| !r.is_empty())
            .collect();
        // Short relators first: cheap deductions early.
        relators.sort_by_key(|r| r.len());
        relators.dedup();

        let mut conjugates = vec![Vec::new(); ncols];
        if opts.strategy == Strategy::Felsch {
            for r in &relators {
                let inv: Vec<u32> = r.iter().rev().map(|&c| inverse_column(c as usize) as u32).collect();
                for base in [r, &inv] {
                    for k in 0..base.len() {
                        let rot: Vec<u32> = base[k..].iter().chain(&base[..k]).copied().collect();
                        let first = rot[0] as usize;
                        if !conjugates[first].contains(&rot) {
                            conjugates[first].push(rot);
                        }
                    }
                }
            }
        }

        let cap_hint = opts.limits.max_live.min(1 << 16);
        let mut e = Enumerator {
            ncols,
            inv: (0..ncols).map(inverse_column).collect(),
            table: Vec::with_capacity(cap_hint * ncols),
            parent: Vec::with_capacity(cap_hint),
            rows: 0,
            live: 0,
            relators,
            conjugates,
            deductions: Vec::new(),
            track_deductions: opts.strategy == Strategy::Felsch,
            queue: Vec::new(),
            limits: opts.limits,
            started: Instant::now(),
            stats: EnumStats::default(),
            debug_checks: opts.debug_checks,
        };
        e.new_row();
        e.stats.defined = 1;
        e
    }

    fn new_row(&mut self) -> u32 {
        let c = self.rows as u32;
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.parent.push(c);
        self.rows += 1;
        self.live += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        c
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.ncols + x] = d;
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = c;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn check_time(&self) -> Result<(), Stop> {
        match self.limits.time_budget {
            Some(b) if self.started.elapsed() > b => Err(Stop::Limit(LimitKind::Time)),
            _ => Ok(()),
        }
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, Stop> {
        if self.stats.defined >= self.limits.max_total {
            return Err(Stop::Limit(LimitKind::TotalCosets));
        }
        if self.rows >= self.limits.max_live {
            return Err(Stop::Full);
        }
        if self.stats.defined.is_multiple_of(4096) {
            self.check_time()?;
        }
        let d = self.new_row();
        self.stats.defined += 1;
        self.set(c, x, d);
        self.set(d, self.inv[x], c);
        if self.track_deductions {
            self.deductions.push((c, x as u32));
        }
        Ok(d)
    }

    fn deduce(&mut self, f: u32, x: usize, b: u32) {
        self.set(f, x, b);
        self.set(b, self.inv[x], f);
        self.stats.deductions += 1;
        if self.track_deductions {
            self.deductions.push((f, x as u32));
        }
        if self.debug_checks {
            self.assert_consistent();
        }
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        self.queue.push(hi);
        self.live -= 1;
        self.stats.coincidences += 1;
    }

    /// Identifies cosets `a` and `b` and everything that follows from it.
    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                let xi = self.inv[x];
                self.set(d, xi, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_xi = self.get(nu, xi);
                    if nu_xi != UNDEF {
                        self.merge(mu, nu_xi);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, xi, mu);
                        if self.track_deductions {
                            self.deductions.push((mu, x as u32));
                        }
                    }
                }
            }
        }
        if self.debug_checks {
            self.assert_consistent();
        }
    }

    /// Traces `w` from `c` forwards and backwards. With `fill`, gaps are
    /// bridged by new definitions; without, an incomplete scan just stops.
    fn scan(&mut self, c: u32, w: &[u32], fill: bool) -> Result<(), Stop> {
        let mut f = c;
        let mut b = c;
        let mut i = 0;
        let mut j = w.len();
        loop {
            while i < j {
                let n = self.get(f, w[i] as usize);
                if n == UNDEF {
                    break;
                }
                f = n;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let n = self.get(b, self.inv[w[j - 1] as usize]);
                if n == UNDEF {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.deduce(f, w[i] as usize, b);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i] as usize)?;
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            let x = x as usize;
            let conj = std::mem::take(&mut self.conjugates[x]);
            for w in &conj {
                let _ = self.scan(c, w, false);
                if !self.is_live(c) {
                    break;
                }
            }
            self.conjugates[x] = conj;
            if !self.is_live(c) {
                continue;
            }
            let d = self.get(c, x);
            if d == UNDEF || !self.is_live(d) {
                continue;
            }
            let xi = self.inv[x];
            let conj = std::mem::take(&mut self.conjugates[xi]);
            for w in &conj {
                let _ = self.scan(d, w, false);
                if !self.is_live(d) {
                    break;
                }
            }
            self.conjugates[xi] = conj;
        }
    }

    /// Scans every relator at every live coset without defining anything.
    fn lookahead(&mut self) {
        self.stats.lookaheads += 1;
        let rels = std::mem::take(&mut self.relators);
        for c in 0..self.rows as u32 {
            for r in &rels {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
        }
        self.relators = rels;
        self.process_deductions();
    }

    /// Renumbers live cosets consecutively, preserving their order.
    /// Returns the new index of the first live coset at or after `from`.
    fn compact(&mut self, from: usize) -> usize {
        self.stats.compactions += 1;
        let mut new_index = vec![UNDEF; self.rows];
        let mut next = 0u32;
        let mut mapped_from = None;
        for c in 0..self.rows {
            if c == from {
                mapped_from = Some(next as usize);
            }
            if self.parent[c] == c as u32 {
                new_index[c] = next;
                next += 1;
            }
        }
        let mapped_from = mapped_from.unwrap_or(next as usize);
        let n = next as usize;
        let mut table = Vec::with_capacity(self.table.capacity());
        for c in 0..self.rows {
            if new_index[c] == UNDEF {
                continue;
            }
            for x in 0..self.ncols {
                let d = self.table[c * self.ncols + x];
                table.push(if d == UNDEF { UNDEF } else { new_index[d as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.rows = n;
        self.live = n;
        let deds = std::mem::take(&mut self.deductions);
        self.deductions = deds
            .into_iter()
            .filter(|&(c, _)| new_index[c as usize] != UNDEF)
            .map(|(c, x)| (new_index[c as usize], x))
            .collect();
        mapped_from
    }

    /// Frees dead rows when the table is full; `Err` if nothing can be freed.
    fn make_room(&mut self, cursor: &mut usize) -> Result<(), Stop> {
        self.lookahead();
        if self.live == self.rows {
            return Err(Stop::Limit(LimitKind::LiveCosets));
        }
        *cursor = self.compact(*cursor);
        Ok(())
    }

    fn first_undefined(&self, from: usize) -> Option<(u32, usize)> {
        for c in from..self.rows {
            if self.parent[c] != c as u32 {
                continue;
            }
            for x in 0..self.ncols {
                if self.table[c * self.ncols + x] == UNDEF {
                    return Some((c as u32, x));
                }
            }
        }
        None
    }

    fn run_hlt(&mut self, subgroup: &[Vec<u32>]) -> Result<(), Stop> {
        let mut c = 0usize;
        loop {
            let step = self.hlt_from(subgroup, &mut c);
            match step {
                Ok(()) => {
                    if self.closed() {
                        return Ok(());
                    }
                    self.lookahead();
                    c = 0;
                }
                Err(Stop::Full) => self.make_room(&mut c)?,
                Err(e) => return Err(e),
            }
        }
    }

    fn hlt_from(&mut self, subgroup: &[Vec<u32>], cursor: &mut usize) -> Result<(), Stop> {
        if *cursor == 0 {
            for w in subgroup {
                self.scan(0, w, true)?;
            }
        }
        let rels = std::mem::take(&mut self.relators);
        let result = self.hlt_loop(&rels, cursor);
        self.relators = rels;
        result
    }

    fn hlt_loop(&mut self, rels: &[Vec<u32>], cursor: &mut usize) -> Result<(), Stop> {
        while *cursor < self.rows {
            let c = *cursor as u32;
            if self.is_live(c) {
                for r in rels {
                    self.scan(c, r, true)?;
                    if !self.is_live(c) {
                        break;
                    }
                }
                if self.is_live(c) {
                    for x in 0..self.ncols {
                        if self.get(c, x) == UNDEF {
                            self.define(c, x)?;
                        }
                    }
                }
            }
            *cursor += 1;
        }
        Ok(())
    }

    fn run_felsch(&mut self, subgroup: &[Vec<u32>]) -> Result<(), Stop> {
        let mut cursor = 0usize;
        loop {
            let step = self.felsch_from(subgroup, &mut cursor);
            match step {
                Ok(()) => {
                    if self.closed() {
                        return Ok(());
                    }
                    self.lookahead();
                    cursor = 0;
                }
                Err(Stop::Full) => self.make_room(&mut cursor)?,
                Err(e) => return Err(e),
            }
        }
    }

    fn felsch_from(&mut self, subgroup: &[Vec<u32>], cursor: &mut usize) -> Result<(), Stop> {
        if *cursor == 0 {
            for w in subgroup {
                self.scan(0, w, true)?;
                self.process_deductions();
            }
            // Relators through coset 0 once, so a presentation whose
            // relators pin coset 0 is seen before any definition.
            let rels = std::mem::take(&mut self.relators);
            for r in &rels {
                let _ = self.scan(0, r, false);
            }
            self.relators = rels;
            self.process_deductions();
        }
        while let Some((c, x)) = self.first_undefined(*cursor) {
            *cursor = c as usize;
            self.define(c, x)?;
            self.process_deductions();
        }
        Ok(())
    }

    /// True when the table is complete and every relator closes at every
    /// live coset.
    fn closed(&mut self) -> bool {
        if self.first_undefined(0).is_some() {
            return false;
        }
        for c in 0..self.rows as u32 {
            if !self.is_live(c) {
                continue;
            }
            for r in &self.relators {
                let end = r.iter().fold(c, |k, &x| self.get(k, x as usize));
                if end != c {
                    return false;
                }
            }
        }
        true
    }

    fn assert_consistent(&self) {
        for c in 0..self.rows as u32 {
            if !self.is_live(c) {
                continue;
            }
            for x in 0..self.ncols {
                let d = self.get(c, x);
                if d == UNDEF {
                    continue;
                }
                assert!(self.is_live(d), "live coset {c} points at dead coset {d}");
                assert_eq!(self.get(d, self.inv[x]), c, "inverse inconsistency at ({c}, {x})");
            }
        }
    }

    fn into_table(mut self, num_gens: usize) -> CosetTable {
        self.compact(0);
        CosetTable::from_raw(num_gens, self.rows, self.table)
    }
}

/// Todd–Coxeter enumeration of the cosets of `⟨subgroup⟩` in the group
/// presented by `p`. Returns the index and the closed table on success;
/// hitting a limit returns the statistics gathered so far and no index.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], opts: &EnumOptions) -> EnumOutcome {
    let mut e = Enumerator::new(p, opts);
    let sub: Vec<Vec<u32>> = subgroup.iter().map(word_columns).filter(|w| !w.is_empty()).collect();
    let res = match opts.strategy {
        Strategy::Hlt => e.run_hlt(&sub),
        Strategy::Felsch => e.run_felsch(&sub),
    };
    match res {
        Ok(()) => {
            let stats = e.stats;
            let table = e.into_table(p.num_generators());
            debug_assert!(table.verify(p, subgroup).is_ok());
            EnumOutcome {
                status: EnumStatus::Completed,
                index: Some(table.index()),
                stats,
                table: Some(table),
            }
        }
        Err(stop) => {
            let limit = match stop {
                Stop::Limit(k) => k,
                Stop::Full => LimitKind::LiveCosets,
            };
            EnumOutcome {
                status: EnumStatus::LimitExceeded { limit },
                index: None,
                stats: e.stats,
                table: None,
            }
        }
    }
}
