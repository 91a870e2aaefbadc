//! Domain types and stage-game primitives: the exogenous parameter vector,
//! platforms and ballot matches, the three utility functions, relative
//! valence quantities, election resolution, and winning-policy ranges.
//!
//! Everything here is a pure function of its inputs; all types are `Copy`.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

/// Default absolute tolerance for tie detection in utility and valence
/// comparisons. Knife-edge cases (zero valence advantage, exact voter
/// indifference) must be reachable from floating-point inputs.
pub const DEFAULT_TIE_EPS: f64 = 1e-9;

/// Three-way comparison with an absolute tolerance: `Equal` iff
/// `|a - b| <= eps`.
pub fn cmp_eps(a: f64, b: f64, eps: f64) -> Ordering {
    if (a - b).abs() <= eps {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameter {field}: {message}")]
    InvalidParam {
        field: &'static str,
        message: String,
    },
    #[error("party {party:?} cannot run candidate {candidate:?}")]
    InvalidMatch { party: Party, candidate: Politician },
    #[error("platform {policy} violates the side constraint for {candidate:?}")]
    SideConstraint { candidate: Politician, policy: f64 },
    #[error("negative rent {0}")]
    NegativeRent(f64),
    #[error("insiders seek no rent, got {0}")]
    InsiderRent(f64),
    #[error("relative valence advantage is defined for party R candidates, not {0:?}")]
    NotAnRCandidate(Politician),
    #[error("no equilibrium case matched (V_r={v_r}, V_o={v_o}, b_R={b_r}); this should be unreachable")]
    CaseConsistency { v_r: f64, v_o: f64, b_r: f64 },
}

/// The full exogenous parameter vector. Positions live on the real ideology
/// line with the median voter at 0; leftist positions are negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Party L bliss point, `b_L < 0`.
    #[serde(rename = "b_L")]
    pub b_l: f64,
    /// Party R bliss point, `b_R > 0`.
    #[serde(rename = "b_R")]
    pub b_r: f64,
    /// Partisan affect factor for party L, `alpha_L >= 0`.
    #[serde(rename = "alpha_L")]
    pub alpha_l: f64,
    /// Partisan affect factor for party R, `alpha_R >= 0`.
    #[serde(rename = "alpha_R")]
    pub alpha_r: f64,
    /// Insider l bliss point, `k_l < 0`.
    pub k_l: f64,
    /// Insider r bliss point, `k_r > 0`.
    pub k_r: f64,
    /// Outsider bliss point, `k_o >= 0`.
    pub k_o: f64,
    /// Valence of insider l, `nu_l >= 0`.
    pub nu_l: f64,
    /// Valence of insider r, `nu_r >= 0`.
    pub nu_r: f64,
    /// Valence of the outsider, `nu_o >= 0`.
    pub nu_o: f64,
}

impl ModelParams {
    /// Checks every domain invariant, naming the first violated field.
    pub fn validate(&self) -> Result<(), ModelError> {
        fn finite(field: &'static str, v: f64) -> Result<(), ModelError> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ModelError::InvalidParam {
                    field,
                    message: format!("must be finite, got {v}"),
                })
            }
        }
        for (field, v) in [
            ("b_L", self.b_l),
            ("b_R", self.b_r),
            ("alpha_L", self.alpha_l),
            ("alpha_R", self.alpha_r),
            ("k_l", self.k_l),
            ("k_r", self.k_r),
            ("k_o", self.k_o),
            ("nu_l", self.nu_l),
            ("nu_r", self.nu_r),
            ("nu_o", self.nu_o),
        ] {
            finite(field, v)?;
        }
        let err = |field, message: String| Err(ModelError::InvalidParam { field, message });
        if self.b_l >= 0.0 {
            return err("b_L", format!("b_L < 0 required, got {}", self.b_l));
        }
        if self.b_r <= 0.0 {
            return err("b_R", format!("b_R > 0 required, got {}", self.b_r));
        }
        if self.k_l >= 0.0 {
            return err("k_l", format!("k_l < 0 required, got {}", self.k_l));
        }
        if self.k_r <= 0.0 {
            return err("k_r", format!("k_r > 0 required, got {}", self.k_r));
        }
        if self.k_o < 0.0 {
            return err("k_o", format!("k_o >= 0 required, got {}", self.k_o));
        }
        for (field, v) in [
            ("alpha_L", self.alpha_l),
            ("alpha_R", self.alpha_r),
            ("nu_l", self.nu_l),
            ("nu_r", self.nu_r),
            ("nu_o", self.nu_o),
        ] {
            if v < 0.0 {
                return err(field, format!("{field} >= 0 required, got {v}"));
            }
        }
        Ok(())
    }

    /// Relative valence advantage of endorsing insider r: `alpha_R nu_r - alpha_L nu_l`.
    pub fn v_r(&self) -> f64 {
        self.alpha_r * self.nu_r - self.alpha_l * self.nu_l
    }

    /// Relative valence advantage of endorsing the outsider: `nu_o - alpha_L nu_l`.
    /// The affect factor is 1 for outsiders.
    pub fn v_o(&self) -> f64 {
        self.nu_o - self.alpha_l * self.nu_l
    }

    /// Perceived valence of candidate `c` when running for its party.
    pub fn perceived_valence(&self, c: Politician) -> f64 {
        match c {
            Politician::InsiderL => self.alpha_l * self.nu_l,
            Politician::InsiderR => self.alpha_r * self.nu_r,
            Politician::Outsider => self.nu_o,
        }
    }

    /// Advantage of the given party-R candidate (`V_r` or `V_o`).
    pub fn advantage_of(&self, c: Politician) -> Result<f64, ModelError> {
        match c {
            Politician::InsiderR => Ok(self.v_r()),
            Politician::Outsider => Ok(self.v_o()),
            Politician::InsiderL => Err(ModelError::NotAnRCandidate(c)),
        }
    }

    /// Bliss point of politician `c`.
    pub fn bliss(&self, c: Politician) -> f64 {
        match c {
            Politician::InsiderL => self.k_l,
            Politician::InsiderR => self.k_r,
            Politician::Outsider => self.k_o,
        }
    }

    /// Raw (unweighted) valence of politician `c`.
    pub fn raw_valence(&self, c: Politician) -> f64 {
        match c {
            Politician::InsiderL => self.nu_l,
            Politician::InsiderR => self.nu_r,
            Politician::Outsider => self.nu_o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    L,
    R,
}

impl Party {
    pub fn bliss(&self, params: &ModelParams) -> f64 {
        match self {
            Party::L => params.b_l,
            Party::R => params.b_r,
        }
    }
}

/// The three politicians. Insiders l and r seek no rent; only the outsider
/// may attach a positive rent to her platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Politician {
    #[serde(rename = "l")]
    InsiderL,
    #[serde(rename = "r")]
    InsiderR,
    #[serde(rename = "o")]
    Outsider,
}

impl Politician {
    /// Party that can field this candidate.
    pub fn home_party(&self) -> Party {
        match self {
            Politician::InsiderL => Party::L,
            Politician::InsiderR | Politician::Outsider => Party::R,
        }
    }

    /// Policy side constraint: `x_l <= 0`, `x_r, x_o >= 0`.
    pub fn side_ok(&self, policy: f64) -> bool {
        match self {
            Politician::InsiderL => policy <= 0.0,
            Politician::InsiderR | Politician::Outsider => policy >= 0.0,
        }
    }

    pub fn may_seek_rent(&self) -> bool {
        matches!(self, Politician::Outsider)
    }
}

/// A binding (policy, rent) pair offered by a politician to a party.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Platform {
    pub policy: f64,
    pub rent: f64,
}

impl Platform {
    pub fn new(policy: f64, rent: f64) -> Self {
        Platform { policy, rent }
    }

    /// The null platform `(0, 0)`, offered by prospective losers.
    pub fn null() -> Self {
        Platform {
            policy: 0.0,
            rent: 0.0,
        }
    }
}

/// A party-candidate-platform triple as it appears on the ballot.
///
/// Construction validates the pairing (L only fields l; R fields r or o),
/// the policy side constraint, and the rent rules, so downstream utility
/// code never sees an ill-formed match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchTicket {
    pub party: Party,
    pub candidate: Politician,
    pub platform: Platform,
}

impl MatchTicket {
    pub fn new(party: Party, candidate: Politician, platform: Platform) -> Result<Self, ModelError> {
        if candidate.home_party() != party {
            return Err(ModelError::InvalidMatch { party, candidate });
        }
        if !candidate.side_ok(platform.policy) {
            return Err(ModelError::SideConstraint {
                candidate,
                policy: platform.policy,
            });
        }
        if platform.rent < 0.0 {
            return Err(ModelError::NegativeRent(platform.rent));
        }
        if platform.rent != 0.0 && !candidate.may_seek_rent() {
            return Err(ModelError::InsiderRent(platform.rent));
        }
        Ok(MatchTicket {
            party,
            candidate,
            platform,
        })
    }

    /// Effective affect multiplier on the candidate's valence: `alpha_P`,
    /// fixed at 1 when the candidate is the outsider.
    pub fn affect_weight(&self, params: &ModelParams) -> f64 {
        match (self.party, self.candidate) {
            (Party::L, Politician::InsiderL) => params.alpha_l,
            (Party::R, Politician::InsiderR) => params.alpha_r,
            (Party::R, Politician::Outsider) => 1.0,
            _ => unreachable!("MatchTicket::new validates the pairing"),
        }
    }
}

/// Election outcome: either a decisive win or an equal-probability coin flip
/// between two matches that leave the median voter indifferent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ElectionResult {
    DecisiveWin { winner: MatchTicket },
    Lottery {
        #[serde(rename = "ticketA")]
        ticket_a: MatchTicket,
        #[serde(rename = "ticketB")]
        ticket_b: MatchTicket,
    },
}

impl ElectionResult {
    pub fn branches(&self) -> Vec<MatchTicket> {
        match self {
            ElectionResult::DecisiveWin { winner } => vec![*winner],
            ElectionResult::Lottery { ticket_a, ticket_b } => vec![*ticket_a, *ticket_b],
        }
    }

    pub fn is_lottery(&self) -> bool {
        matches!(self, ElectionResult::Lottery { .. })
    }

    /// Expected winning policy; branch policies averaged for lotteries.
    pub fn expected_policy(&self) -> f64 {
        average(self.branches().iter().map(|t| t.platform.policy))
    }

    /// Expected winning rent; branch rents averaged for lotteries.
    pub fn expected_rent(&self) -> f64 {
        average(self.branches().iter().map(|t| t.platform.rent))
    }

    /// Expected polarization: mean absolute distance of the winning policy
    /// from the median voter at 0.
    pub fn expected_abs_policy(&self) -> f64 {
        average(self.branches().iter().map(|t| t.platform.policy.abs()))
    }

    /// Expected median-voter utility, lottery branches averaged.
    pub fn expected_median_utility(&self, params: &ModelParams) -> f64 {
        average(self.branches().iter().map(|t| median_utility(t, params)))
    }

    /// Expected party utility from the realized outcome: the winning branch's
    /// platform when the party wins, the winning policy otherwise.
    pub fn expected_party_utility(&self, party: Party, params: &ModelParams) -> f64 {
        average(self.branches().iter().map(|t| {
            if t.party == party {
                party_utility(party, t.platform, true, t.platform.policy, params)
            } else {
                party_utility(party, Platform::null(), false, t.platform.policy, params)
            }
        }))
    }
}

fn average(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v;
        n += 1;
    }
    sum / n as f64
}

/// Relative policy divergence `X = |x_R| - |x_L|` and the relative valence
/// advantage of the fielded party-R candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeQuantities {
    /// `X = |x_R| - |x_L|`.
    pub divergence: f64,
    /// `V_r` or `V_o` depending on the candidate.
    pub advantage: f64,
}

/// Median-voter utility of a match: `-|x_P| + alpha_P nu_{c_P}`.
///
/// The rent component never enters; voters do not bear it.
pub fn median_utility(ticket: &MatchTicket, params: &ModelParams) -> f64 {
    -ticket.platform.policy.abs()
        + ticket.affect_weight(params) * params.raw_valence(ticket.candidate)
}

/// Party utility of an accepted offer: `-|x_p - b| - m_p` when the endorsed
/// candidate wins, `-|y - b|` when she loses and `y` is the winning policy.
pub fn party_utility(
    party: Party,
    accepted: Platform,
    won: bool,
    winning_policy: f64,
    params: &ModelParams,
) -> f64 {
    let b = party.bliss(params);
    if won {
        -(accepted.policy - b).abs() - accepted.rent
    } else {
        -(winning_policy - b).abs()
    }
}

/// Politician utility: `-|x_p - k_p| + m_p` when accepted and victorious;
/// otherwise `-|y - k_p|`. A rejected offer and a lost election are worth
/// the same.
pub fn politician_utility(
    who: Politician,
    own_platform: Platform,
    accepted: bool,
    won: bool,
    winning_policy: f64,
    params: &ModelParams,
) -> f64 {
    let k = params.bliss(who);
    if accepted && won {
        -(own_platform.policy - k).abs() + own_platform.rent
    } else {
        -(winning_policy - k).abs()
    }
}

/// `X` and the advantage `V` for the given party-R candidate.
pub fn relative_quantities(
    x_l: f64,
    x_r: f64,
    candidate: Politician,
    params: &ModelParams,
) -> Result<RelativeQuantities, ModelError> {
    let advantage = params.advantage_of(candidate)?;
    Ok(RelativeQuantities {
        divergence: x_r.abs() - x_l.abs(),
        advantage,
    })
}

/// Resolves the election between the two tickets by comparing median-voter
/// utilities. Equality within `tie_eps` produces the 50/50 lottery; this is
/// the `X` versus `V` comparison in relative-quantity form.
pub fn resolve_election(
    ticket_l: &MatchTicket,
    ticket_r: &MatchTicket,
    params: &ModelParams,
    tie_eps: f64,
) -> ElectionResult {
    let u_l = median_utility(ticket_l, params);
    let u_r = median_utility(ticket_r, params);
    match cmp_eps(u_r, u_l, tie_eps) {
        Ordering::Greater => ElectionResult::DecisiveWin { winner: *ticket_r },
        Ordering::Less => ElectionResult::DecisiveWin { winner: *ticket_l },
        Ordering::Equal => ElectionResult::Lottery {
            ticket_a: *ticket_l,
            ticket_b: *ticket_r,
        },
    }
}

/// Winning-policy ranges induced by a relative valence advantage `V`.
///
/// `V >= 0`: party R wins with policies in `[0, V]` while L accepts its whole
/// half-line and loses. `V < 0`: party L wins with policies in `[V, 0]` while
/// R accepts any nonnegative policy and loses. Intervals are reported closed,
/// following the limit convention; a decisive-win check at the exact boundary
/// resolves to a lottery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinningRange {
    /// Side whose winning policies form the bounded interval.
    pub advantaged: Party,
    /// Lower endpoint of the winning interval.
    pub lo: f64,
    /// Upper endpoint of the winning interval.
    pub hi: f64,
}

impl WinningRange {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// The losing side together with its acceptable policy set, which is its
    /// entire half-line: it loses regardless and accepts any offer.
    pub fn loser_accepts(&self) -> (Party, f64, f64) {
        match self.advantaged {
            Party::R => (Party::L, f64::NEG_INFINITY, 0.0),
            Party::L => (Party::R, 0.0, f64::INFINITY),
        }
    }
}

pub fn winning_policy_range(v: f64) -> WinningRange {
    if v >= 0.0 {
        WinningRange {
            advantaged: Party::R,
            lo: 0.0,
            hi: v,
        }
    } else {
        WinningRange {
            advantaged: Party::L,
            lo: v,
            hi: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_params() -> ModelParams {
        ModelParams {
            b_l: -1.0,
            b_r: 1.0,
            alpha_l: 1.0,
            alpha_r: 1.0,
            k_l: -0.3,
            k_r: 0.5,
            k_o: 0.3,
            nu_l: 1.0,
            nu_r: 1.0,
            nu_o: 0.0,
        }
    }

    fn ticket(party: Party, c: Politician, x: f64, m: f64) -> MatchTicket {
        MatchTicket::new(party, c, Platform::new(x, m)).unwrap()
    }

    #[test]
    fn median_utility_examples() {
        let p = base_params();
        let t = ticket(Party::L, Politician::InsiderL, -0.3, 0.0);
        assert_eq!(median_utility(&t, &p), 0.7);

        let t = ticket(Party::R, Politician::Outsider, 0.0, 0.0);
        assert_eq!(median_utility(&t, &p), 0.0);

        let mut p2 = p;
        p2.nu_o = 0.8;
        let t = ticket(Party::R, Politician::Outsider, 0.3, 5.0);
        assert!((median_utility(&t, &p2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn party_utility_examples() {
        let p = base_params();
        let u = party_utility(Party::R, Platform::new(0.3, 0.4), true, 0.0, &p);
        assert!((u - (-1.1)).abs() < 1e-15);

        let u = party_utility(Party::R, Platform::null(), false, p.b_r, &p);
        assert_eq!(u, 0.0);

        let mut p2 = p;
        p2.b_l = -0.3;
        let u = party_utility(Party::L, Platform::new(-0.3, 0.0), true, 0.0, &p2);
        assert_eq!(u, 0.0);
    }

    #[test]
    fn politician_utility_examples() {
        let p = base_params();
        let u = politician_utility(
            Politician::Outsider,
            Platform::new(0.3, 0.4),
            true,
            true,
            0.0,
            &p,
        );
        assert!((u - 0.4).abs() < 1e-15);

        let u = politician_utility(
            Politician::InsiderR,
            Platform::null(),
            false,
            false,
            p.k_r,
            &p,
        );
        assert_eq!(u, 0.0);

        let u = politician_utility(
            Politician::InsiderR,
            Platform::new(0.2, 0.0),
            true,
            false,
            -0.1,
            &p,
        );
        assert!((u - (-0.6)).abs() < 1e-15);
    }

    #[test]
    fn relative_quantities_examples() {
        let p = base_params();
        let rq = relative_quantities(-0.2, 0.3, Politician::Outsider, &p).unwrap();
        assert!((rq.divergence - 0.1).abs() < 1e-15);

        let rq = relative_quantities(0.0, 0.0, Politician::InsiderR, &p).unwrap();
        assert_eq!(rq.divergence, 0.0);

        let mut p2 = p;
        p2.nu_r = 0.5;
        let rq = relative_quantities(0.0, 0.0, Politician::InsiderR, &p2).unwrap();
        assert!((rq.advantage - (-0.5)).abs() < 1e-15);

        assert!(relative_quantities(0.0, 0.0, Politician::InsiderL, &p).is_err());
    }

    #[test]
    fn resolve_election_examples() {
        // V_{c_R} = 0.5 via the outsider's valence.
        let mut p = base_params();
        p.nu_o = 1.5;
        let tl = ticket(Party::L, Politician::InsiderL, -0.2, 0.0);
        let tr = ticket(Party::R, Politician::Outsider, 0.3, 0.0);
        match resolve_election(&tl, &tr, &p, DEFAULT_TIE_EPS) {
            ElectionResult::DecisiveWin { winner } => assert_eq!(winner.party, Party::R),
            other => panic!("expected R win, got {other:?}"),
        }

        // Symmetric null platforms with V = 0.
        let mut p0 = base_params();
        p0.nu_o = 1.0;
        let tl = ticket(Party::L, Politician::InsiderL, 0.0, 0.0);
        let tr = ticket(Party::R, Politician::Outsider, 0.0, 0.0);
        assert!(resolve_election(&tl, &tr, &p0, DEFAULT_TIE_EPS).is_lottery());

        // X = 0.6 > V = 0.5: L wins.
        let tl = ticket(Party::L, Politician::InsiderL, 0.0, 0.0);
        let tr = ticket(Party::R, Politician::Outsider, 0.6, 0.0);
        match resolve_election(&tl, &tr, &p, DEFAULT_TIE_EPS) {
            ElectionResult::DecisiveWin { winner } => assert_eq!(winner.party, Party::L),
            other => panic!("expected L win, got {other:?}"),
        }
    }

    #[test]
    fn winning_policy_range_examples() {
        let r = winning_policy_range(0.5);
        assert_eq!(r.advantaged, Party::R);
        assert_eq!((r.lo, r.hi), (0.0, 0.5));
        assert_eq!(r.loser_accepts(), (Party::L, f64::NEG_INFINITY, 0.0));

        let r = winning_policy_range(0.0);
        assert_eq!((r.lo, r.hi), (0.0, 0.0));

        let r = winning_policy_range(-0.4);
        assert_eq!(r.advantaged, Party::L);
        assert_eq!((r.lo, r.hi), (-0.4, 0.0));
        assert_eq!(r.loser_accepts(), (Party::R, 0.0, f64::INFINITY));
    }

    #[test]
    fn ticket_validation() {
        assert!(MatchTicket::new(Party::L, Politician::InsiderR, Platform::null()).is_err());
        assert!(MatchTicket::new(Party::R, Politician::InsiderL, Platform::null()).is_err());
        assert!(MatchTicket::new(Party::L, Politician::InsiderL, Platform::new(0.1, 0.0)).is_err());
        assert!(MatchTicket::new(Party::R, Politician::InsiderR, Platform::new(0.1, 0.2)).is_err());
        assert!(MatchTicket::new(Party::R, Politician::Outsider, Platform::new(0.1, 0.2)).is_ok());
    }

    #[test]
    fn params_validation_names_field() {
        let mut p = base_params();
        p.k_l = 0.2;
        let err = p.validate().unwrap_err().to_string();
        assert!(err.contains("k_l"), "error should name k_l: {err}");
    }
}
