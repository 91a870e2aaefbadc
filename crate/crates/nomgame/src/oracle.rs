//! Brute-force equilibrium finder on discretized platform grids, used as the
//! independent ground truth for the closed-form solvers.
//!
//! The solver walks the game backwards on grids, with no reference to the
//! closed-form case tables:
//!
//! 1. votes resolve by direct median-utility comparison (stage 3);
//! 2. the opposing insider l re-optimizes her offer against any endorsed
//!    match by grid search, so party R values each offer on its menu at the
//!    continuation where the opposition responds (stage 2);
//! 3. r and o compete for the nomination (stage 1): where only one of them
//!    can reach the voters, she re-optimizes her whole platform against R's
//!    fallback option; where both can, each posts the winnable offer R likes
//!    best and the nominee extracts rent only up to the runner-up's standing
//!    bid. Limit constructions take a concrete `epsilon` margin in place of
//!    the theory's infinitesimal.
//!
//! Every returned equilibrium is re-checked on the grid (`certified`): the
//! vote leaf, R's endorsement, l's reaction, and the nominee's platform are
//! re-verified against exhaustive enumeration of grid alternatives.

use crate::closed_form::{solve_insider, solve_outsider, CaseLabel, EquilibriumOutcome, GameKind};
use crate::model::{
    cmp_eps, resolve_election, ElectionResult, MatchTicket, ModelParams, Party,
    Platform, Politician,
};
use rand::Rng;
use serde::Serialize;
use std::cmp::Ordering::{Equal, Greater};

/// Default concrete stand-in for the theory's infinitesimal acceptance margin.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Discretization of the platform spaces. Policy and rent grids are uniform
/// with every critical point (and its `±epsilon` shifts) injected, so the
/// spots where best responses genuinely sit are always representable.
#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub policy_lo: f64,
    pub policy_hi: f64,
    pub policy_steps: usize,
    pub rent_hi: f64,
    pub rent_steps: usize,
    /// Concrete acceptance margin replacing the limit construction.
    pub epsilon: f64,
    /// Always injected into both grids (side- and sign-filtered).
    pub critical_points: Vec<f64>,
}

impl GridSpec {
    /// Default grid for a parameter vector: 201 policy points spanning all
    /// bliss points and valence advantages with unit padding, 101 rent points
    /// spanning twice the relevant scale, plus injected critical points.
    pub fn default_for(params: &ModelParams) -> Self {
        Self::with_resolution(params, 201, 101, DEFAULT_EPSILON)
    }

    pub fn with_resolution(
        params: &ModelParams,
        policy_steps: usize,
        rent_steps: usize,
        epsilon: f64,
    ) -> Self {
        let v_r = params.v_r();
        let v_o = params.v_o();
        let policy_lo = params.k_l.min(v_r).min(v_o) - 1.0;
        let policy_hi = params.k_r.max(params.k_o).max(params.b_r).max(v_r).max(v_o) + 1.0;
        let rent_hi =
            2.0 * (params.k_l.abs() + params.b_r.abs() + v_r.abs() + v_o.abs()) + 1.0;
        GridSpec {
            policy_lo,
            policy_hi,
            policy_steps: policy_steps.max(2),
            rent_hi,
            rent_steps: rent_steps.max(2),
            epsilon,
            critical_points: critical_points(params),
        }
    }

    pub fn policy_step(&self) -> f64 {
        (self.policy_hi - self.policy_lo) / (self.policy_steps - 1) as f64
    }

    pub fn rent_step(&self) -> f64 {
        self.rent_hi / (self.rent_steps - 1) as f64
    }
}

/// Policies and rents at which best responses can sit: bliss points, valence
/// advantages, the reflected policies about `b_R`, and the indifference
/// rents, all derived from parameter arithmetic alone.
fn critical_points(params: &ModelParams) -> Vec<f64> {
    let v_r = params.v_r();
    let v_o = params.v_o();
    let b_r = params.b_r;
    let g_r = params.k_l.max(v_r);
    let g_o = params.k_l.max(v_o);
    vec![
        0.0,
        params.k_l,
        params.k_r,
        params.k_o,
        b_r,
        v_r,
        v_o,
        g_r,
        g_o,
        2.0 * b_r - g_r,
        2.0 * b_r - g_o,
        params.k_o.min(v_o),
        params.k_r.min(v_r),
        b_r.min(v_r),
        b_r.min(v_o),
        // candidate equilibrium rents
        2.0 * g_r.abs(),
        (g_r - b_r).abs() - (params.k_o.min(v_o) - b_r).abs(),
        (b_r.min(v_r) - b_r).abs() - (b_r.min(v_o) - b_r).abs(),
    ]
}

/// Which game the oracle solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameVariant {
    /// Insiders l and r only; the outsider is absent from R's menu.
    InsiderOnly,
    WithOutsider,
}

/// A certified grid equilibrium: the realized offers, R's endorsement, and
/// the election outcome. Offers of politicians that lose the nomination are
/// their standing bids (the null platform when nothing better exists).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEquilibrium {
    pub offer_l: Platform,
    pub offer_r: Platform,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offer_o: Option<Platform>,
    pub endorsed: Politician,
    pub result: ElectionResult,
    pub certified: bool,
}

impl OracleEquilibrium {
    pub fn winning_policy(&self) -> f64 {
        self.result.expected_policy()
    }

    pub fn winning_rent(&self) -> f64 {
        self.result.expected_rent()
    }
}

/// Stage-3 leaf: identical contract to [`resolve_election`].
pub fn best_vote(
    ticket_l: &MatchTicket,
    ticket_r: &MatchTicket,
    params: &ModelParams,
    tie_eps: f64,
) -> ElectionResult {
    resolve_election(ticket_l, ticket_r, params, tie_eps)
}

/// Stage-2 decision on fixed offers: R endorses the candidate whose offer
/// yields the higher expected party utility given l's offer and the induced
/// election outcome; exact ties go to the insider. L always accepts l.
pub fn best_endorsement(
    offer_r: Platform,
    offer_o: Platform,
    offer_l: Platform,
    params: &ModelParams,
    tie_eps: f64,
) -> Politician {
    let tl = MatchTicket::new(Party::L, Politician::InsiderL, offer_l).expect("valid l offer");
    let value = |candidate: Politician, offer: Platform| {
        let tr = MatchTicket::new(Party::R, candidate, offer).expect("valid R offer");
        best_vote(&tl, &tr, params, tie_eps).expected_party_utility(Party::R, params)
    };
    let u_r = value(Politician::InsiderR, offer_r);
    let u_o = value(Politician::Outsider, offer_o);
    if cmp_eps(u_o, u_r, tie_eps) == Greater {
        Politician::Outsider
    } else {
        Politician::InsiderR
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Leaf {
    CandWins,
    LWins,
    Tie,
}

/// Best reply of insider l against an endorsed party-R match, with the
/// election outcome it induces.
#[derive(Debug, Clone, Copy)]
struct Reaction {
    x_l: f64,
    leaf: Leaf,
}

struct Tables<'a> {
    p: &'a ModelParams,
    tie: f64,
    /// Floating-point guard far below the acceptance margin: strict
    /// preferences must clear it, so grid points sitting exactly on an
    /// indifference line cannot win through rounding crumbs.
    guard: f64,
    l_grid: Vec<f64>,
    r_grid: Vec<f64>,
    o_grid: Vec<f64>,
    rents: Vec<f64>,
    react_r: Vec<Reaction>,
    react_o: Vec<Reaction>,
}

/// l's grid best reply against the endorsed match (c, x_c). Ties prefer the
/// most centrist reply, which canonicalizes flat (hopeless) regions to the
/// null offer. The perceived valence of c already carries the affect weight.
fn react_against(p: &ModelParams, tie: f64, l_grid: &[f64], c: Politician, x_c: f64) -> Reaction {
    let med_c = -x_c.abs() + p.perceived_valence(c);
    let med_l_base = p.alpha_l * p.nu_l;
    let mut best = Reaction {
        x_l: 0.0,
        leaf: Leaf::CandWins,
    };
    let mut best_u = f64::NEG_INFINITY;
    for &x_l in l_grid {
        let med_l = -x_l.abs() + med_l_base;
        let leaf = match cmp_eps(med_l, med_c, tie) {
            Greater => Leaf::LWins,
            Equal => Leaf::Tie,
            _ => Leaf::CandWins,
        };
        let win = -(x_l - p.k_l).abs();
        let lose = -(x_c - p.k_l).abs();
        let u = match leaf {
            Leaf::LWins => win,
            Leaf::CandWins => lose,
            Leaf::Tie => 0.5 * (win + lose),
        };
        if u > best_u || (u == best_u && x_l > best.x_l) {
            best_u = u;
            best = Reaction { x_l, leaf };
        }
    }
    best
}

fn sorted_dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite grid points"));
    v.dedup();
    v
}

impl<'a> Tables<'a> {
    fn build(p: &'a ModelParams, spec: &GridSpec, tie: f64) -> Self {
        let eps = spec.epsilon;
        let mut points = Vec::with_capacity(spec.policy_steps + 3 * spec.critical_points.len() + 1);
        let step = spec.policy_step();
        for i in 0..spec.policy_steps {
            points.push(spec.policy_lo + step * i as f64);
        }
        points.push(0.0);
        for &c in &spec.critical_points {
            if c.is_finite() {
                points.extend_from_slice(&[c - eps, c, c + eps]);
            }
        }
        let l_grid = sorted_dedup(points.iter().copied().filter(|&x| x <= 0.0).collect());
        let pos: Vec<f64> = points.iter().copied().filter(|&x| x >= 0.0).collect();
        let r_grid = sorted_dedup(pos.clone());
        let o_grid = sorted_dedup(pos);

        let mut rents = Vec::with_capacity(spec.rent_steps + 3 * spec.critical_points.len());
        let rstep = spec.rent_step();
        for i in 0..spec.rent_steps {
            rents.push(rstep * i as f64);
        }
        for &c in &spec.critical_points {
            if c.is_finite() {
                for m in [c - eps, c, c + eps] {
                    if m >= 0.0 {
                        rents.push(m);
                    }
                }
            }
        }
        let rents = sorted_dedup(rents);

        let react_r = r_grid
            .iter()
            .map(|&x| react_against(p, tie, &l_grid, Politician::InsiderR, x))
            .collect();
        let react_o = o_grid
            .iter()
            .map(|&x| react_against(p, tie, &l_grid, Politician::Outsider, x))
            .collect();
        Tables {
            p,
            tie,
            guard: (spec.epsilon * 1e-3).min(1e-12),
            l_grid,
            r_grid,
            o_grid,
            rents,
            react_r,
            react_o,
        }
    }

    /// Whether offering value `v` keeps the nomination against a rival worth
    /// `fallback`: insiders keep it on ties, the outsider must win strictly.
    fn keeps_nomination(&self, insider: bool, v: f64, fallback: f64) -> bool {
        if insider {
            v >= fallback - self.guard
        } else {
            v > fallback + self.guard
        }
    }

    fn grid(&self, c: Politician) -> &[f64] {
        match c {
            Politician::InsiderR => &self.r_grid,
            Politician::Outsider => &self.o_grid,
            Politician::InsiderL => &self.l_grid,
        }
    }

    fn react(&self, c: Politician) -> &[Reaction] {
        match c {
            Politician::InsiderR => &self.react_r,
            Politician::Outsider => &self.react_o,
            Politician::InsiderL => unreachable!("l has no reaction table"),
        }
    }

    fn zero_index(&self, c: Politician) -> usize {
        self.grid(c)
            .iter()
            .position(|&x| x == 0.0)
            .expect("grids always contain 0")
    }

    fn react_to(&self, c: Politician, x_c: f64) -> Reaction {
        react_against(self.p, self.tie, &self.l_grid, c, x_c)
    }

    /// R's expected utility of endorsing candidate `c` at grid index `i`
    /// with rent `m`, valued at the continuation where l reacts.
    fn value_r(&self, c: Politician, i: usize, m: f64) -> f64 {
        let x_c = self.grid(c)[i];
        let rea = self.react(c)[i];
        let win = -(x_c - self.p.b_r).abs() - m;
        let lose = -(rea.x_l - self.p.b_r).abs();
        match rea.leaf {
            Leaf::CandWins => win,
            Leaf::LWins => lose,
            Leaf::Tie => 0.5 * (win + lose),
        }
    }

    /// Candidate `c`'s own expected utility from offering (grid[i], m).
    fn u_cand(&self, c: Politician, i: usize, m: f64) -> f64 {
        let x_c = self.grid(c)[i];
        let rea = self.react(c)[i];
        let k = self.p.bliss(c);
        let win = -(x_c - k).abs() + m;
        let lose = -(rea.x_l - k).abs();
        match rea.leaf {
            Leaf::CandWins => win,
            Leaf::LWins => lose,
            Leaf::Tie => 0.5 * (win + lose),
        }
    }
}

/// The candidate's most R-attractive offer among those reaching the voters:
/// winning offers when any exist, tying offers otherwise. Returns
/// `(grid index, R's value of the zero-rent bid)`.
fn standing_bid(t: &Tables, c: Politician) -> Option<(usize, f64)> {
    let react = t.react(c);
    let pick = |want: Leaf| -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, rea) in react.iter().enumerate() {
            if rea.leaf != want {
                continue;
            }
            let v = t.value_r(c, i, 0.0);
            let better = match best {
                None => true,
                // prefer the more centrist policy among equal-value bids
                Some((bi, bv)) => v > bv || (v == bv && t.grid(c)[i] < t.grid(c)[bi]),
            };
            if better {
                best = Some((i, v));
            }
        }
        best
    };
    pick(Leaf::CandWins).or_else(|| pick(Leaf::Tie))
}

/// Nominee's platform search against a fixed fallback value: maximize her
/// own utility over offers that reach the voters and keep R's endorsement.
/// Insiders keep the nomination on exact value ties; the outsider must beat
/// the fallback strictly, which realizes the `epsilon`-margin acceptance.
fn optimize_nominee(t: &Tables, c: Politician, fallback: f64) -> Option<(usize, f64)> {
    let react = t.react(c);
    let insider = c == Politician::InsiderR;
    let zero_rent = [0.0];
    let rents: &[f64] = if insider { &zero_rent } else { &t.rents };
    let mut best: Option<(usize, f64, f64, f64)> = None; // (index, rent, u, value)
    for (i, rea) in react.iter().enumerate() {
        if rea.leaf == Leaf::LWins {
            continue;
        }
        for &m in rents {
            let v = t.value_r(c, i, m);
            if !t.keeps_nomination(insider, v, fallback) {
                continue;
            }
            let u = t.u_cand(c, i, m);
            let better = match best {
                None => true,
                Some((bi, bm, bu, bv)) => {
                    let k = t.p.bliss(c);
                    let (x, bx) = (t.grid(c)[i], t.grid(c)[bi]);
                    u > bu
                        || (u == bu
                            && (v > bv
                                || (v == bv
                                    && ((x - k).abs() < (bx - k).abs()
                                        || ((x - k).abs() == (bx - k).abs()
                                            && (x, m) < (bx, bm))))))
                }
            };
            if better {
                best = Some((i, m, u, v));
            }
        }
    }
    best.map(|(i, m, _, _)| (i, m))
}

/// Largest grid rent the auction winner can attach while R still strictly
/// prefers her over the runner-up's standing bid.
fn max_rent_against(t: &Tables, c: Politician, i: usize, rival_value: f64) -> Option<f64> {
    let mut best = None;
    for &m in &t.rents {
        if t.value_r(c, i, m) > rival_value + t.guard && best.is_none_or(|b| m > b) {
            best = Some(m);
        }
    }
    best
}

#[derive(Debug, Clone, Copy)]
enum Mode {
    Auction,
    TieAuction,
    Monopoly(Politician),
    DamageControl,
}

fn pick_mode(t: &Tables) -> Mode {
    let has = |c: Politician, want: Leaf| t.react(c).iter().any(|r| r.leaf == want);
    let w_r = has(Politician::InsiderR, Leaf::CandWins);
    let w_o = has(Politician::Outsider, Leaf::CandWins);
    let cap_r = w_r || has(Politician::InsiderR, Leaf::Tie);
    let cap_o = w_o || has(Politician::Outsider, Leaf::Tie);
    if w_r && w_o {
        Mode::Auction
    } else if !cap_r && !cap_o {
        Mode::DamageControl
    } else if w_r || (cap_r && !cap_o) {
        Mode::Monopoly(Politician::InsiderR)
    } else if w_o || (cap_o && !cap_r) {
        Mode::Monopoly(Politician::Outsider)
    } else {
        Mode::TieAuction
    }
}

struct Solution {
    endorsed: Politician,
    platform: Platform,
    /// Standing offer of the candidate that lost the nomination.
    rival_offer: Platform,
}

fn solve_with_outsider(t: &Tables) -> Solution {
    let r = Politician::InsiderR;
    let o = Politician::Outsider;
    let f_r = t.value_r(r, t.zero_index(r), 0.0);
    let f_o = t.value_r(o, t.zero_index(o), 0.0);

    match pick_mode(t) {
        Mode::Auction | Mode::TieAuction => {
            let (ri, rv) = standing_bid(t, r).expect("auction mode implies r reaches voters");
            let (oi, ov) = standing_bid(t, o).expect("auction mode implies o reaches voters");
            let bid_r = Platform::new(t.r_grid[ri], 0.0);
            if ov > rv + t.guard {
                let m = max_rent_against(t, o, oi, rv).expect("zero rent beats the rival");
                Solution {
                    endorsed: o,
                    platform: Platform::new(t.o_grid[oi], m),
                    rival_offer: bid_r,
                }
            } else {
                Solution {
                    endorsed: r,
                    platform: bid_r,
                    rival_offer: Platform::new(t.o_grid[oi], 0.0),
                }
            }
        }
        Mode::Monopoly(p) => {
            let fallback = if p == r { f_o } else { f_r };
            match optimize_nominee(t, p, fallback) {
                Some((i, m)) => Solution {
                    endorsed: p,
                    platform: Platform::new(t.grid(p)[i], m),
                    rival_offer: Platform::null(),
                },
                // nothing beats the fallback: fall through to damage control
                None => damage_control(t, f_r, f_o),
            }
        }
        Mode::DamageControl => damage_control(t, f_r, f_o),
    }
}

fn damage_control(t: &Tables, f_r: f64, f_o: f64) -> Solution {
    let endorsed = if f_o > f_r + t.guard {
        Politician::Outsider
    } else {
        Politician::InsiderR
    };
    Solution {
        endorsed,
        platform: Platform::null(),
        rival_offer: Platform::null(),
    }
}

fn solve_insider_only(t: &Tables) -> Solution {
    let r = Politician::InsiderR;
    let mut best: Option<(usize, f64)> = None;
    for i in 0..t.r_grid.len() {
        let u = t.u_cand(r, i, 0.0);
        let better = match best {
            None => true,
            Some((bi, bu)) => u > bu || (u == bu && t.r_grid[i] < t.r_grid[bi]),
        };
        if better {
            best = Some((i, u));
        }
    }
    let (i, _) = best.expect("nonempty grid");
    Solution {
        endorsed: r,
        platform: Platform::new(t.r_grid[i], 0.0),
        rival_offer: Platform::null(),
    }
}

fn assemble(t: &Tables, variant: GameVariant, sol: &Solution) -> OracleEquilibrium {
    let i = t
        .grid(sol.endorsed)
        .iter()
        .position(|&x| x == sol.platform.policy)
        .expect("platform policy is a grid point");
    let rea = t.react(sol.endorsed)[i];
    let offer_l = Platform::new(rea.x_l, 0.0);
    let ticket_l = MatchTicket::new(Party::L, Politician::InsiderL, offer_l).expect("valid l");
    let ticket_r = MatchTicket::new(Party::R, sol.endorsed, sol.platform).expect("valid R match");
    let result = resolve_election(&ticket_l, &ticket_r, t.p, t.tie);
    let (offer_r, offer_o) = match (variant, sol.endorsed) {
        (GameVariant::InsiderOnly, _) => (sol.platform, None),
        (_, Politician::InsiderR) => (sol.platform, Some(sol.rival_offer)),
        (_, Politician::Outsider) => (sol.rival_offer, Some(sol.platform)),
        (_, Politician::InsiderL) => unreachable!("R endorses r or o"),
    };
    OracleEquilibrium {
        offer_l,
        offer_r,
        offer_o,
        endorsed: sol.endorsed,
        result,
        certified: false,
    }
}

/// Finds the grid equilibrium of the requested game by backward induction.
///
/// Returns the certified equilibria (one per parameter vector with this
/// protocol); an empty vector would indicate a certification failure and is
/// reported as data rather than an error.
pub fn find_stage1_equilibria(
    params: &ModelParams,
    spec: &GridSpec,
    variant: GameVariant,
    tie_eps: f64,
) -> Vec<OracleEquilibrium> {
    let t = Tables::build(params, spec, tie_eps);
    let sol = match variant {
        GameVariant::InsiderOnly => solve_insider_only(&t),
        GameVariant::WithOutsider => solve_with_outsider(&t),
    };
    let mut eq = assemble(&t, variant, &sol);
    eq.certified = recheck_equilibrium(&t, variant, &sol, &eq);
    vec![eq]
}

/// Grid re-verification of a solution: the vote leaf, l's reaction, R's
/// endorsement against the rival's standing option, and the nominee's
/// platform are each re-checked by exhaustive enumeration.
fn recheck_equilibrium(
    t: &Tables,
    variant: GameVariant,
    sol: &Solution,
    eq: &OracleEquilibrium,
) -> bool {
    let c = sol.endorsed;
    let i = match t.grid(c).iter().position(|&x| x == sol.platform.policy) {
        Some(i) => i,
        None => return false,
    };
    let slack = 1e-12;

    // Vote leaf must match the reaction table's classification.
    let rea = t.react(c)[i];
    let ticket_l =
        MatchTicket::new(Party::L, Politician::InsiderL, Platform::new(rea.x_l, 0.0)).unwrap();
    let ticket_r = MatchTicket::new(Party::R, c, sol.platform).unwrap();
    let leaf_ok = match resolve_election(&ticket_l, &ticket_r, t.p, t.tie) {
        ElectionResult::DecisiveWin { winner } if winner.party == Party::R => {
            rea.leaf == Leaf::CandWins
        }
        ElectionResult::DecisiveWin { .. } => rea.leaf == Leaf::LWins,
        ElectionResult::Lottery { .. } => rea.leaf == Leaf::Tie,
    };
    if !leaf_ok || eq.result != resolve_election(&ticket_l, &ticket_r, t.p, t.tie) {
        return false;
    }

    // l's reaction attains the grid maximum of her expected utility.
    let best_l = t.react_to(c, sol.platform.policy);
    let u_of = |x_l: f64| {
        let tl =
            MatchTicket::new(Party::L, Politician::InsiderL, Platform::new(x_l, 0.0)).unwrap();
        let branches = resolve_election(&tl, &ticket_r, t.p, t.tie).branches();
        branches
            .iter()
            .map(|b| -(b.platform.policy - t.p.k_l).abs())
            .sum::<f64>()
            / branches.len() as f64
    };
    if u_of(rea.x_l) + slack < u_of(best_l.x_l) {
        return false;
    }

    if variant == GameVariant::InsiderOnly {
        // r's offer attains the unconstrained grid maximum of her utility.
        let u_star = t.u_cand(c, i, 0.0);
        return (0..t.r_grid.len()).all(|j| t.u_cand(Politician::InsiderR, j, 0.0) <= u_star + slack);
    }

    // Stage-2 rationality: R weakly prefers the realized endorsement to the
    // rival's standing option.
    let rival = if c == Politician::InsiderR {
        Politician::Outsider
    } else {
        Politician::InsiderR
    };
    let rival_value = match standing_bid(t, rival) {
        Some((_, v)) => v,
        None => t.value_r(rival, t.zero_index(rival), 0.0),
    };
    let realized_value = t.value_r(c, i, sol.platform.rent);
    if realized_value + slack < rival_value {
        return false;
    }

    // Nominee optimality, per the applicable protocol stage.
    match pick_mode(t) {
        Mode::Monopoly(p) if p == c => {
            let fallback = t.value_r(rival, t.zero_index(rival), 0.0);
            let u_star = t.u_cand(c, i, sol.platform.rent);
            let insider = c == Politician::InsiderR;
            let zero_rent = [0.0];
            for (j, rea) in t.react(c).iter().enumerate() {
                if rea.leaf == Leaf::LWins {
                    continue;
                }
                let rents: &[f64] = if insider { &zero_rent } else { &t.rents };
                for &m in rents {
                    let v = t.value_r(c, j, m);
                    if t.keeps_nomination(insider, v, fallback) && t.u_cand(c, j, m) > u_star + slack
                    {
                        return false;
                    }
                }
            }
            true
        }
        Mode::Auction | Mode::TieAuction => {
            // The realized bid must be R's favorite reachable offer of the
            // nominee, and any rent must leave R strictly ahead of the rival.
            let bid_value = t.value_r(c, i, 0.0);
            let best = standing_bid(t, c).map(|(_, v)| v).unwrap_or(f64::NEG_INFINITY);
            if bid_value + slack < best {
                return false;
            }
            if sol.platform.rent > 0.0 {
                realized_value > rival_value + t.guard
            } else {
                true
            }
        }
        Mode::DamageControl => realized_value + slack >= rival_value,
        Mode::Monopoly(_) => {
            // nominee stood down and damage control was used
            sol.platform == Platform::null()
        }
    }
}

/// One row of a closed-form-versus-oracle comparison.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceCheck {
    pub game: GameKind,
    pub case: CaseLabel,
    pub closed_winner: String,
    pub closed_policy: f64,
    pub closed_rent: f64,
    pub oracle_winner: String,
    pub oracle_policy: f64,
    pub oracle_rent: f64,
    pub winner_agrees: bool,
    pub policy_agrees: bool,
    pub rent_agrees: bool,
    pub certified: bool,
}

impl InstanceCheck {
    pub fn agrees(&self) -> bool {
        self.winner_agrees && self.policy_agrees && self.rent_agrees && self.certified
    }
}

/// Comparison of both games' closed-form equilibria against the grid oracle.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub tolerance_policy: f64,
    pub tolerance_rent: f64,
    pub checks: Vec<InstanceCheck>,
    pub all_agree: bool,
}

/// Compact winner identity: "L/l", "R/r", "R/o", or "lottery(a,b)".
pub fn winner_identity(result: &ElectionResult) -> String {
    fn tag(t: &MatchTicket) -> String {
        let p = match t.party {
            Party::L => "L",
            Party::R => "R",
        };
        let c = match t.candidate {
            Politician::InsiderL => "l",
            Politician::InsiderR => "r",
            Politician::Outsider => "o",
        };
        format!("{p}/{c}")
    }
    match result {
        ElectionResult::DecisiveWin { winner } => tag(winner),
        ElectionResult::Lottery { ticket_a, ticket_b } => {
            let mut pair = [tag(ticket_a), tag(ticket_b)];
            pair.sort();
            format!("lottery({},{})", pair[0], pair[1])
        }
    }
}

fn check_instance(
    game: GameKind,
    closed: &EquilibriumOutcome,
    oracle: &OracleEquilibrium,
    tol_policy: f64,
    tol_rent: f64,
) -> InstanceCheck {
    let closed_winner = winner_identity(&closed.result);
    let oracle_winner = winner_identity(&oracle.result);
    InstanceCheck {
        game,
        case: closed.case,
        winner_agrees: closed_winner == oracle_winner,
        policy_agrees: (closed.winning_policy - oracle.winning_policy()).abs() <= tol_policy,
        rent_agrees: (closed.winning_rent - oracle.winning_rent()).abs() <= tol_rent,
        closed_winner,
        closed_policy: closed.winning_policy,
        closed_rent: closed.winning_rent,
        oracle_winner,
        oracle_policy: oracle.winning_policy(),
        oracle_rent: oracle.winning_rent(),
        certified: oracle.certified,
    }
}

/// Runs both closed-form solvers and the grid oracle on the same parameters
/// and reports field-by-field agreement within `grid step + epsilon`.
/// Discrepancies are data, not errors.
pub fn verify_closed_form(
    params: &ModelParams,
    spec: &GridSpec,
    tie_eps: f64,
) -> VerificationReport {
    let tol_policy = spec.policy_step() + spec.epsilon;
    let tol_rent = spec.rent_step() + spec.epsilon;
    let mut checks = Vec::with_capacity(2);

    let closed_i = solve_insider(params, tie_eps);
    let oracle_i = find_stage1_equilibria(params, spec, GameVariant::InsiderOnly, tie_eps);
    checks.push(check_instance(
        GameKind::InsiderOnly,
        &closed_i,
        &oracle_i[0],
        tol_policy,
        tol_rent,
    ));

    if let Ok(closed_o) = solve_outsider(params, tie_eps) {
        let oracle_o = find_stage1_equilibria(params, spec, GameVariant::WithOutsider, tie_eps);
        checks.push(check_instance(
            GameKind::WithOutsider,
            &closed_o,
            &oracle_o[0],
            tol_policy,
            tol_rent,
        ));
    }

    let all_agree = checks.iter().all(InstanceCheck::agrees);
    VerificationReport {
        tolerance_policy: tol_policy,
        tolerance_rent: tol_rent,
        checks,
        all_agree,
    }
}

/// Negative control: corrupts the closed-form outsider-game outcome before
/// comparing, so a healthy oracle must flag a discrepancy.
pub fn verify_closed_form_corrupted(
    params: &ModelParams,
    spec: &GridSpec,
    tie_eps: f64,
) -> VerificationReport {
    let mut report = verify_closed_form(params, spec, tie_eps);
    for check in &mut report.checks {
        if check.game == GameKind::WithOutsider {
            check.closed_policy += 0.37;
            check.closed_rent += 0.53;
            check.closed_winner = "corrupted".to_string();
            check.winner_agrees = check.closed_winner == check.oracle_winner;
            check.policy_agrees =
                (check.closed_policy - check.oracle_policy).abs() <= report.tolerance_policy;
            check.rent_agrees =
                (check.closed_rent - check.oracle_rent).abs() <= report.tolerance_rent;
        }
    }
    report.all_agree = report.checks.iter().all(InstanceCheck::agrees);
    report
}

/// R's expected utility of endorsing `candidate` at `platform`, valued at
/// the continuation where l best-responds on the grid. Diagnostic hook for
/// stage-2 rationality and deviation checks.
pub fn endorsement_value(
    params: &ModelParams,
    spec: &GridSpec,
    candidate: Politician,
    platform: Platform,
    tie_eps: f64,
) -> f64 {
    let t = Tables::build(params, spec, tie_eps);
    let rea = t.react_to(candidate, platform.policy);
    let win = -(platform.policy - params.b_r).abs() - platform.rent;
    let lose = -(rea.x_l - params.b_r).abs();
    match rea.leaf {
        Leaf::CandWins => win,
        Leaf::LWins => lose,
        Leaf::Tie => 0.5 * (win + lose),
    }
}

/// Distance of a parameter vector from the nearest equilibrium-case
/// boundary, in valence units. Draws near a boundary are excluded from
/// winner-identity verification because the discretized game may
/// legitimately sit on the other side.
pub fn boundary_distance(params: &ModelParams) -> f64 {
    let v_r = params.v_r();
    let v_o = params.v_o();
    let b_r = params.b_r;
    let mid_56 = 0.5 * (params.k_l.max(v_r) + params.k_o.min(v_o));
    let mid_78 = 0.5 * (params.k_l.max(v_o) + params.k_r.min(v_r));
    [
        v_r.abs(),
        v_o.abs(),
        (v_r - v_o).abs(),
        (b_r - v_r).abs(),
        (b_r - v_o).abs(),
        (mid_56 - b_r).abs(),
        (mid_78 - b_r).abs(),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

/// Random valid parameter vector covering all equilibrium cases with
/// non-trivial mass. Used by verification batches and randomized tests.
pub fn sample_params<R: Rng>(rng: &mut R) -> ModelParams {
    let p = ModelParams {
        b_l: -rng.gen_range(0.1..2.0),
        b_r: rng.gen_range(0.1..1.8),
        alpha_l: rng.gen_range(0.25..1.75),
        alpha_r: rng.gen_range(0.25..1.75),
        k_l: -rng.gen_range(0.05..2.0),
        k_r: rng.gen_range(0.05..2.0),
        k_o: rng.gen_range(0.0..2.0),
        nu_l: rng.gen_range(0.25..1.75),
        nu_r: rng.gen_range(0.0..2.5),
        nu_o: rng.gen_range(0.0..2.5),
    };
    debug_assert!(p.validate().is_ok());
    p
}
