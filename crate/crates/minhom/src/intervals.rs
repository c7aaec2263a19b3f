//! Inclusion-free interval representations of orderable targets, and the
//! conversions between orderings and representations in both directions.
//!
//! Endpoints involve fractions like 1/2^i, which underflow binary floating
//! point long before the graph gets large, so everything here is exact
//! rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::Graph;
use crate::recognition::{verify_ordering, MinMaxOrdering};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("ordering fails its verifier")]
    InvalidOrdering,
    #[error("representation does not realize the graph")]
    RepresentationMismatch,
    #[error("two intervals of one family share the left endpoint {0}, so the order is not \
             well-defined")]
    TiedEndpoints(String),
    #[error("derived ordering failed verification; this indicates a defect in this build")]
    SelfCheckFailed,
}

/// Closed interval with exact rational endpoints, `left <= right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub left: BigRational,
    pub right: BigRational,
}

impl Interval {
    pub fn new(left: BigRational, right: BigRational) -> Self {
        assert!(left <= right, "interval endpoints out of order");
        Interval { left, right }
    }

    pub fn point(at: BigRational) -> Self {
        Interval {
            left: at.clone(),
            right: at,
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.left.clone().max(other.left.clone()) <= self.right.clone().min(other.right.clone())
    }

    /// Containment of `other` in `self`, including equality.
    pub fn contains(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

/// Interval representation: one inclusion-free family per vertex class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntervalRep {
    Bigraph {
        white: BTreeMap<String, Interval>,
        black: BTreeMap<String, Interval>,
    },
    Reflexive {
        intervals: BTreeMap<String, Interval>,
    },
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: usize) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn half_power(i: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2).pow(i as u32))
}

/// Build the interval representation realized by a verified ordering.
///
/// Bigraph case: black position j gets [j - 1/4, j + 1/4]; white position i
/// with neighbors gets [L(i) - 1/2^i, R(i) + 1/2 - 1/2^i] where L, R are its
/// leftmost and rightmost neighbor positions. Reflexive case: position i
/// gets [i, R(i) + i/(p+1)] with R(i) the largest adjacent position
/// (at least i, via the loop). Isolated vertices of either class are placed
/// as distinct degenerate intervals strictly to the right of everything
/// else, where they intersect nothing and nest in nothing.
pub fn ordering_to_intervals(
    h: &Graph,
    ord: &MinMaxOrdering,
) -> Result<IntervalRep, IntervalError> {
    if !verify_ordering(h, ord).map_err(|_| IntervalError::InvalidOrdering)? {
        return Err(IntervalError::InvalidOrdering);
    }
    let rep = match ord {
        MinMaxOrdering::Reflexive { order } => reflexive_intervals(h, order),
        MinMaxOrdering::Bigraph { white, black } => bigraph_intervals(h, white, black),
    };
    if !verify_representation(h, &rep) {
        return Err(IntervalError::SelfCheckFailed);
    }
    Ok(rep)
}

fn reflexive_intervals(h: &Graph, order: &[String]) -> IntervalRep {
    let p = order.len();
    let pos: BTreeMap<&str, usize> = order
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i + 1))
        .collect();
    let mut intervals = BTreeMap::new();
    for (i0, v) in order.iter().enumerate() {
        let i = i0 + 1;
        let vi = h.index_of(v).unwrap();
        let r = h
            .neighbors(vi)
            .map(|w| pos[h.name(w)])
            .chain(std::iter::once(i))
            .max()
            .unwrap();
        let right = int(r) + BigRational::new(BigInt::from(i), BigInt::from(p + 1));
        intervals.insert(v.clone(), Interval::new(int(i), right));
    }
    IntervalRep::Reflexive { intervals }
}

fn bigraph_intervals(h: &Graph, white_order: &[String], black_order: &[String]) -> IntervalRep {
    let black_pos: BTreeMap<&str, usize> = black_order
        .iter()
        .enumerate()
        .map(|(j, v)| (v.as_str(), j + 1))
        .collect();
    let mut white = BTreeMap::new();
    let mut black = BTreeMap::new();
    let mut isolated: Vec<(&String, bool)> = Vec::new(); // (vertex, is_white)

    for (j0, v) in black_order.iter().enumerate() {
        let j = j0 + 1;
        let vi = h.index_of(v).unwrap();
        if h.degree(vi) == 0 {
            isolated.push((v, false));
        } else {
            black.insert(
                v.clone(),
                Interval::new(int(j) - ratio(1, 4), int(j) + ratio(1, 4)),
            );
        }
    }
    for (i0, u) in white_order.iter().enumerate() {
        let i = i0 + 1;
        let ui = h.index_of(u).unwrap();
        let positions: Vec<usize> = h.neighbors(ui).map(|w| black_pos[h.name(w)]).collect();
        if positions.is_empty() {
            isolated.push((u, true));
            continue;
        }
        let l = *positions.iter().min().unwrap();
        let r = *positions.iter().max().unwrap();
        let eps = half_power(i);
        white.insert(
            u.clone(),
            Interval::new(int(l) - eps.clone(), int(r) + ratio(1, 2) - eps),
        );
    }

    // Distinct points beyond every other endpoint; adjacency and
    // inclusion-freeness are untouched by construction.
    let mut far = int(black_order.len() + 1);
    for iv in white.values().chain(black.values()) {
        if iv.right >= far {
            far = iv.right.clone() + BigRational::one();
        }
    }
    // Keep the recovered left-endpoint order aligned with the given orders:
    // isolated whites in white-order position, then isolated blacks.
    isolated.sort_by_key(|&(_, is_white)| !is_white);
    for (k, (v, is_white)) in isolated.into_iter().enumerate() {
        let point = Interval::point(far.clone() + int(k + 1));
        if is_white {
            white.insert(v.clone(), point);
        } else {
            black.insert(v.clone(), point);
        }
    }
    IntervalRep::Bigraph { white, black }
}

/// Recover the ordering from a representation by sorting each family by left
/// endpoint. Inclusion-freeness makes left- and right-endpoint orders agree.
pub fn intervals_to_ordering(
    h: &Graph,
    rep: &IntervalRep,
) -> Result<MinMaxOrdering, IntervalError> {
    let families: Vec<&BTreeMap<String, Interval>> = match rep {
        IntervalRep::Bigraph { white, black } => vec![white, black],
        IntervalRep::Reflexive { intervals } => vec![intervals],
    };
    for family in &families {
        let mut lefts: Vec<&BigRational> = family.values().map(|iv| &iv.left).collect();
        lefts.sort();
        for pair in lefts.windows(2) {
            if pair[0] == pair[1] {
                return Err(IntervalError::TiedEndpoints(pair[0].to_string()));
            }
        }
    }
    if !verify_representation(h, rep) {
        return Err(IntervalError::RepresentationMismatch);
    }
    let sorted = |family: &BTreeMap<String, Interval>| -> Vec<String> {
        let mut items: Vec<(&BigRational, &String)> =
            family.iter().map(|(v, iv)| (&iv.left, v)).collect();
        items.sort();
        items.into_iter().map(|(_, v)| v.clone()).collect()
    };
    let ord = match rep {
        IntervalRep::Bigraph { white, black } => MinMaxOrdering::Bigraph {
            white: sorted(white),
            black: sorted(black),
        },
        IntervalRep::Reflexive { intervals } => MinMaxOrdering::Reflexive {
            order: sorted(intervals),
        },
    };
    match verify_ordering(h, &ord) {
        Ok(true) => Ok(ord),
        _ => Err(IntervalError::SelfCheckFailed),
    }
}

/// Exact check that `rep` realizes `h`: intervals intersect exactly where
/// edges exist (cross pairs for bigraphs, all pairs for the reflexive case),
/// and each family is inclusion-free. Vertex classes must match the graph.
pub fn verify_representation(h: &Graph, rep: &IntervalRep) -> bool {
    match rep {
        IntervalRep::Reflexive { intervals } => {
            if h.names().len() != intervals.len()
                || !h.names().iter().all(|v| intervals.contains_key(v))
            {
                return false;
            }
            // Every interval meets itself, so loops must be everywhere.
            if h.names().iter().any(|v| !h.has_loop_named(v)) {
                return false;
            }
            let vs: Vec<&String> = intervals.keys().collect();
            for a in 0..vs.len() {
                for b in (a + 1)..vs.len() {
                    let edge = h.has_edge_named(vs[a], vs[b]);
                    if intervals[vs[a]].intersects(&intervals[vs[b]]) != edge {
                        return false;
                    }
                }
            }
            inclusion_free(intervals)
        }
        IntervalRep::Bigraph { white, black } => {
            if white.len() + black.len() != h.n()
                || !white.keys().chain(black.keys()).all(|v| h.index_of(v).is_some())
                || white.keys().any(|v| black.contains_key(v))
            {
                return false;
            }
            if h.loop_indices().next().is_some() {
                return false;
            }
            // Intra-class edges cannot be realized by cross intersections.
            for (a, b) in h.edge_names() {
                if white.contains_key(&a) == white.contains_key(&b) {
                    return false;
                }
            }
            for (u, ui) in white {
                for (v, vi) in black {
                    if ui.intersects(vi) != h.has_edge_named(u, v) {
                        return false;
                    }
                }
            }
            inclusion_free(white) && inclusion_free(black)
        }
    }
}

fn inclusion_free(family: &BTreeMap<String, Interval>) -> bool {
    let ivs: Vec<&Interval> = family.values().collect();
    for a in 0..ivs.len() {
        for b in 0..ivs.len() {
            if a != b && ivs[a].contains(ivs[b]) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// JSON form: an interval is [[ln, ld], [rn, rd]] with exact integer
// numerator/denominator pairs; values beyond i64 are carried as strings.

fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(n.clone()) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BigIntJson {
    Small(i64),
    Big(String),
}

fn rational_parts(r: &BigRational) -> (BigInt, BigInt) {
    (r.numer().clone(), r.denom().clone())
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        struct Int<'a>(&'a BigInt);
        impl Serialize for Int<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_bigint(self.0, s)
            }
        }
        let (ln, ld) = rational_parts(&self.left);
        let (rn, rd) = rational_parts(&self.right);
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&[Int(&ln), Int(&ld)])?;
        seq.serialize_element(&[Int(&rn), Int(&rd)])?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: [[BigIntJson; 2]; 2] = Deserialize::deserialize(d)?;
        let to_bigint = |x: &BigIntJson| -> Result<BigInt, D::Error> {
            match x {
                BigIntJson::Small(v) => Ok(BigInt::from(*v)),
                BigIntJson::Big(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| D::Error::custom(format!("bad integer `{s}`: {e}"))),
            }
        };
        let [l, r] = &raw;
        let make = |pair: &[BigIntJson; 2]| -> Result<BigRational, D::Error> {
            let n = to_bigint(&pair[0])?;
            let d = to_bigint(&pair[1])?;
            if d == BigInt::from(0) {
                return Err(D::Error::custom("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        };
        let left = make(l)?;
        let right = make(r)?;
        if left > right {
            return Err(D::Error::custom("interval endpoints out of order"));
        }
        Ok(Interval { left, right })
    }
}
