//! Subfield lattices: tower lengths, the normalised weights `ℵ`, and the
//! maximal subfield with small discriminant.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfieldNode {
    pub label: String,
    pub degree: usize,
    pub signature: (usize, usize),
    /// Absolute discriminant.
    pub discriminant: BigInt,
}

impl SubfieldNode {
    pub fn new(label: &str, degree: usize, signature: (usize, usize), discriminant: BigInt) -> Self {
        SubfieldNode { label: label.to_string(), degree, signature, discriminant }
    }

    pub fn rationals() -> Self {
        SubfieldNode::new("Q", 1, (1, 0), BigInt::one())
    }

    pub fn unit_rank(&self) -> usize {
        self.signature.0 + self.signature.1 - 1
    }
}

/// Containment DAG of the intermediate fields of a top field.
#[derive(Clone, Debug)]
pub struct SubfieldLattice {
    nodes: Vec<SubfieldNode>,
    /// `below[b]` lists every `a` with `a ⊊ b`.
    below: Vec<BTreeSet<usize>>,
    top: usize,
    bottom: usize,
    lambda: Vec<usize>,
}

impl SubfieldLattice {
    /// Builds and validates a lattice; `edges` are pairs `(a, b)` of labels
    /// with `a ⊊ b`. Transitive pairs may be given or omitted.
    pub fn new(nodes: Vec<SubfieldNode>, edges: &[(String, String)]) -> Result<Self> {
        let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.label.as_str(), i)).collect();
        if index.len() != nodes.len() {
            return Err(Error::Lattice("duplicate node labels".into()));
        }
        let bottom = *index.get("Q").ok_or_else(|| Error::Lattice("the rationals are missing".into()))?;
        if nodes[bottom].degree != 1 || !nodes[bottom].discriminant.is_one() {
            return Err(Error::Lattice("bottom node must have degree 1 and discriminant 1".into()));
        }
        let max_deg = nodes.iter().map(|n| n.degree).max().unwrap_or(1);
        let tops: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].degree == max_deg).collect();
        if tops.len() != 1 {
            return Err(Error::Lattice("there must be a unique node of maximal degree".into()));
        }
        let top = tops[0];
        let n = nodes.len();
        let mut below = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            let ia = *index.get(a.as_str()).ok_or_else(|| Error::UnknownNode(a.clone()))?;
            let ib = *index.get(b.as_str()).ok_or_else(|| Error::UnknownNode(b.clone()))?;
            if ia == ib {
                return Err(Error::Lattice(format!("self containment {a}")));
            }
            below[ib].insert(ia);
        }
        // Q below everything, everything below the top
        for i in 0..n {
            if i != bottom {
                below[i].insert(bottom);
            }
            if i != top {
                below[top].insert(i);
            }
        }
        // transitive closure in order of degree; a cycle shows up as a
        // containment between nodes whose degrees do not increase
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| nodes[i].degree);
        for &b in &order {
            let direct: Vec<usize> = below[b].iter().copied().collect();
            for a in direct {
                if nodes[a].degree >= nodes[b].degree {
                    return Err(Error::Lattice(format!(
                        "{} ⊂ {} but the degrees are {} and {}",
                        nodes[a].label, nodes[b].label, nodes[a].degree, nodes[b].degree
                    )));
                }
                let extra: Vec<usize> = below[a].iter().copied().collect();
                below[b].extend(extra);
            }
        }
        for b in 0..n {
            for &a in &below[b] {
                let (na, nb) = (&nodes[a], &nodes[b]);
                if nb.degree % na.degree != 0 {
                    return Err(Error::Lattice(format!("degree of {} does not divide degree of {}", na.label, nb.label)));
                }
                let e = nb.degree / na.degree;
                if !(nb.discriminant.clone() % na.discriminant.pow(e as u32)).is_zero() {
                    return Err(Error::Lattice(format!(
                        "D({})^{} does not divide D({})",
                        na.label, e, nb.label
                    )));
                }
            }
        }
        let mut lambda = vec![0usize; n];
        for &b in &order {
            lambda[b] = below[b].iter().map(|&a| lambda[a] + 1).max().unwrap_or(0);
        }
        let lat = SubfieldLattice { nodes, below, top, bottom, lambda };
        let d = lat.nodes[top].degree;
        if (1usize << lat.lambda[top]) > d {
            return Err(Error::Lattice(format!("tower length {} exceeds log2 {d}", lat.lambda[top])));
        }
        Ok(lat)
    }

    pub fn nodes(&self) -> &[SubfieldNode] {
        &self.nodes
    }

    pub fn top(&self) -> &SubfieldNode {
        &self.nodes[self.top]
    }

    pub fn bottom(&self) -> &SubfieldNode {
        &self.nodes[self.bottom]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.nodes.iter().position(|n| n.label == label).ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn node(&self, label: &str) -> Result<&SubfieldNode> {
        Ok(&self.nodes[self.index_of(label)?])
    }

    /// `a ⊊ b`.
    pub fn contains(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.below[self.index_of(b)?].contains(&self.index_of(a)?))
    }

    /// Labels of every node strictly containing `a`.
    pub fn above(&self, a: &str) -> Result<Vec<String>> {
        let ia = self.index_of(a)?;
        Ok((0..self.nodes.len()).filter(|&b| self.below[b].contains(&ia)).map(|b| self.nodes[b].label.clone()).collect())
    }

    /// Every maximal chain `Q = k_0 ⊊ k_1 ⊊ … ⊊ k`, where each step has no
    /// node strictly between.
    pub fn maximal_paths(&self) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        let mut stack = vec![vec![self.bottom]];
        while let Some(path) = stack.pop() {
            let last = *path.last().expect("nonempty");
            if last == self.top {
                out.push(path.iter().map(|&i| self.nodes[i].label.clone()).collect());
                continue;
            }
            for b in 0..self.nodes.len() {
                if self.below[b].contains(&last) && !self.below[b].iter().any(|&m| self.below[m].contains(&last)) {
                    let mut p = path.clone();
                    p.push(b);
                    stack.push(p);
                }
            }
        }
        out.sort();
        out
    }
}

/// Largest unit rank among proper subfields.
pub fn rho(lattice: &SubfieldLattice) -> usize {
    (0..lattice.nodes.len()).filter(|&i| i != lattice.top).map(|i| lattice.nodes[i].unit_rank()).max().unwrap_or(0)
}

/// Longest tower length from `Q` to the node.
pub fn lambda(lattice: &SubfieldLattice, node: &str) -> Result<usize> {
    Ok(lattice.lambda[lattice.index_of(node)?])
}

fn rational_pow(base: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// `ℵ(k′) = (2[k:k′])^{λ(k′)-λ(k)}` as an exact rational.
pub fn aleph(lattice: &SubfieldLattice, node: &str) -> Result<BigRational> {
    let i = lattice.index_of(node)?;
    let k = &lattice.nodes[lattice.top];
    let rel = k.degree / lattice.nodes[i].degree;
    let e = lattice.lambda[i] as i64 - lattice.lambda[lattice.top] as i64;
    Ok(rational_pow(&BigRational::from_integer(BigInt::from(2 * rel)), e))
}

#[derive(Clone, Debug)]
pub struct TowerCheck {
    pub values: Vec<BigRational>,
    pub holds: bool,
}

/// Strict increase `0 < ℵ(k_0) < ℵ(k_1) < … = 1` along a tower.
pub fn check_aleph_monotonic(lattice: &SubfieldLattice, tower: &[String]) -> Result<TowerCheck> {
    if tower.first().map(String::as_str) != Some(lattice.bottom().label.as_str())
        || tower.last().map(String::as_str) != Some(lattice.top().label.as_str())
    {
        return Err(Error::NotAPath("a tower must run from Q to the top field".into()));
    }
    for w in tower.windows(2) {
        if !lattice.contains(&w[0], &w[1])? {
            return Err(Error::NotAPath(format!("{} is not contained in {}", w[0], w[1])));
        }
    }
    let values = tower.iter().map(|n| aleph(lattice, n)).collect::<Result<Vec<_>>>()?;
    let holds = values[0] > BigRational::zero()
        && values.windows(2).all(|w| w[0] < w[1])
        && values.last().is_some_and(One::is_one);
    Ok(TowerCheck { values, holds })
}

#[derive(Clone, Debug)]
pub struct AlephGapReport {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

/// `ℵ(k′(α)) − ℵ(k′)[k:k′] ≥ 2^{λ(k′)−λ(k)} [k:k′]^{λ(k′)−λ(k)+1}`.
pub fn check_aleph_gap(lattice: &SubfieldLattice, kprime: &str, kprime_alpha: &str) -> Result<AlephGapReport> {
    if !lattice.contains(kprime, kprime_alpha)? {
        return Err(Error::NotAPath(format!("{kprime} is not strictly contained in {kprime_alpha}")));
    }
    let k = lattice.top();
    let kp = lattice.node(kprime)?;
    let rel = BigRational::from_integer(BigInt::from(k.degree / kp.degree));
    let e = lambda(lattice, kprime)? as i64 - lattice.lambda[lattice.top] as i64;
    let lhs = aleph(lattice, kprime_alpha)? - aleph(lattice, kprime)? * &rel;
    let rhs = rational_pow(&BigRational::from_integer(BigInt::from(2)), e) * rational_pow(&rel, e + 1);
    let holds = lhs >= rhs;
    Ok(AlephGapReport { lhs, rhs, holds })
}

/// `base^exp`, or `None` once the value exceeds `cap`.
fn capped_pow(base: &BigInt, exp: &BigInt, cap: &BigInt) -> Option<BigInt> {
    if base.is_one() || base.is_zero() || exp.is_zero() {
        let v = if exp.is_zero() { BigInt::one() } else { base.clone() };
        return (&v <= cap).then_some(v);
    }
    let mut acc = BigInt::one();
    let mut i = BigInt::zero();
    while &i < exp {
        acc *= base;
        if &acc > cap {
            return None;
        }
        i += 1;
    }
    Some(acc)
}

/// `D' < D^{p/q}` decided exactly as `D'^q < D^p`.
pub fn below_power(d_small: &BigInt, d_top: &BigInt, exponent: &BigRational) -> bool {
    let (p, q) = (exponent.numer(), exponent.denom());
    let rhs = num_traits::pow(d_top.clone(), p.try_into().expect("small exponent"));
    match capped_pow(d_small, q, &rhs) {
        Some(lhs) => lhs < rhs,
        None => false,
    }
}

/// Nodes `k′ ≠ k` with `D_{k′} < D_k^{ℵ(k′)}`.
pub fn eligible(lattice: &SubfieldLattice) -> Result<Vec<String>> {
    let d_top = &lattice.top().discriminant;
    let mut out = Vec::new();
    for (i, n) in lattice.nodes.iter().enumerate() {
        if i != lattice.top && below_power(&n.discriminant, d_top, &aleph(lattice, &n.label)?) {
            out.push(n.label.clone());
        }
    }
    Ok(out)
}

/// A maximal proper node `k*` with `D_{k*} < D_k^{ℵ(k*)}`: every node
/// strictly above it fails the inequality. Among several maximal nodes the
/// one of largest degree, then smallest label, is returned.
pub fn maximal_kstar(lattice: &SubfieldLattice) -> Result<SubfieldNode> {
    let elig = eligible(lattice)?;
    let set: BTreeSet<&str> = elig.iter().map(String::as_str).collect();
    let mut best: Option<&SubfieldNode> = None;
    for label in &elig {
        if lattice.above(label)?.iter().any(|b| set.contains(b.as_str())) {
            continue;
        }
        let n = lattice.node(label)?;
        best = match best {
            Some(b) if (b.degree, std::cmp::Reverse(&b.label)) >= (n.degree, std::cmp::Reverse(&n.label)) => Some(b),
            _ => Some(n),
        };
    }
    best.cloned().ok_or_else(|| Error::Lattice("no eligible subfield (the rationals should always be)".into()))
}

/// Exhaustive re-check of the defining inequalities of `k*`.
pub fn verify_kstar(lattice: &SubfieldLattice, kstar: &str) -> Result<bool> {
    let d_top = &lattice.top().discriminant;
    let ks = lattice.node(kstar)?;
    if ks.label == lattice.top().label || !below_power(&ks.discriminant, d_top, &aleph(lattice, kstar)?) {
        return Ok(false);
    }
    for n in lattice.nodes() {
        if lattice.contains(kstar, &n.label)? {
            let a = aleph(lattice, &n.label)?;
            if below_power(&n.discriminant, d_top, &a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Seeded random lattice with power-of-two degrees up to 32. Discriminants
/// are built bottom-up as `lcm_a D_a^{[b:a]}` times a small random factor,
/// so the divisibility conditions hold by construction.
pub fn synthetic_lattice(seed: u64) -> SubfieldLattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top_exp: u32 = rng.gen_range(1..=5);
    let mut nodes = vec![SubfieldNode::rationals()];
    let mut exps = vec![0u32];
    let extra = rng.gen_range(0..=2 * top_exp as usize + 1);
    for _ in 0..extra {
        if top_exp < 2 {
            break;
        }
        exps.push(rng.gen_range(1..top_exp));
    }
    exps.push(top_exp);
    exps[1..].sort();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for b in 1..exps.len() {
        let lower: Vec<usize> = (0..b).filter(|&a| exps[a] < exps[b]).collect();
        let count = rng.gen_range(1..=lower.len().min(3));
        for _ in 0..count {
            let a = lower[rng.gen_range(0..lower.len())];
            edges.push((a, b));
        }
    }
    // everything below the top
    let t = exps.len() - 1;
    for a in 0..t {
        edges.push((a, t));
    }
    // closure to compute discriminants consistently
    let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); exps.len()];
    for &(a, b) in &edges {
        below[b].insert(a);
    }
    for b in 0..exps.len() {
        let direct: Vec<usize> = below[b].iter().copied().collect();
        for a in direct {
            let extra: Vec<usize> = below[a].iter().copied().collect();
            below[b].extend(extra);
        }
    }
    for b in 1..exps.len() {
        let deg = 1usize << exps[b];
        let mut disc = BigInt::one();
        for &a in &below[b] {
            let e = 1u32 << (exps[b] - exps[a]);
            let da = if a == 0 { BigInt::one() } else { nodes[a].discriminant.clone() };
            disc = disc.lcm(&da.pow(e));
        }
        disc *= BigInt::from(rng.gen_range(2..=7));
        let label = if b == t { "k".to_string() } else { format!("n{b}") };
        nodes.push(SubfieldNode::new(&label, deg, (deg, 0), disc));
    }
    let edge_labels: Vec<(String, String)> =
        edges.iter().map(|&(a, b)| (nodes[a].label.clone(), nodes[b].label.clone())).collect();
    SubfieldLattice::new(nodes, &edge_labels).expect("synthetic lattice is consistent")
}
