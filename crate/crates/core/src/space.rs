//! Finite T0 spaces, presented by their specialization order.
//!
//! A finite T0 space is the same thing as a finite poset: the open sets are
//! exactly the up-sets. Subsets of a space are [`PointSet`] bitmasks, so a
//! space holds at most 64 points.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 64;

/// A subset of the points of a space, one bit per point index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn singleton(i: usize) -> Self {
        PointSet(1 << i)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

struct SpaceInner {
    name: Option<String>,
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// `up[x]` = `{y : x <= y}`.
    up: Vec<PointSet>,
    /// `down[x]` = `{y : y <= x}`.
    down: Vec<PointSet>,
    opens: OnceLock<Vec<PointSet>>,
}

/// A finite T0 space. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FinSpace(Arc<SpaceInner>);

impl PartialEq for FinSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.names == other.0.names && self.0.up == other.0.up)
    }
}

impl Eq for FinSpace {}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rel = Vec::new();
        for x in self.points() {
            for y in self.up(x).iter() {
                if x != y {
                    rel.push(format!("{}<={}", self.name(x), self.name(y)));
                }
            }
        }
        f.debug_struct("FinSpace")
            .field("points", &self.0.names)
            .field("le", &rel)
            .finish()
    }
}

impl FinSpace {
    /// Builds a space from point names and generating pairs `(x, y)` meaning
    /// `x <= y`. The reflexive-transitive closure is taken; a cycle between
    /// distinct points is rejected as not T0.
    pub fn new(
        name: Option<String>,
        names: Vec<String>,
        generators: &[(usize, usize)],
    ) -> Result<Self> {
        let n = names.len();
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, nm) in names.iter().enumerate() {
            if index.insert(nm.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(nm.clone()));
            }
        }
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for &(x, y) in generators {
            up[x].insert(y);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    up[i] = up[i].union(up[k]);
                }
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    let (a, b) = if x < y { (x, y) } else { (y, x) };
                    return Err(Error::NotT0(names[a].clone(), names[b].clone()));
                }
            }
        }
        let mut down = vec![PointSet::EMPTY; n];
        for x in 0..n {
            for y in up[x].iter() {
                down[y].insert(x);
            }
        }
        Ok(FinSpace(Arc::new(SpaceInner {
            name,
            names,
            index,
            up,
            down,
            opens: OnceLock::new(),
        })))
    }

    /// Points named `p0, p1, ...` with the given generating order.
    pub fn anonymous(n: usize, generators: &[(usize, usize)]) -> Result<Self> {
        Self::new(None, (0..n).map(|i| format!("p{i}")).collect(), generators)
    }

    /// A space with the discrete order on the given names.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(
            None,
            names.iter().map(|s| s.as_ref().to_string()).collect(),
            &[],
        )
    }

    /// The chain `names[0] < names[1] < ...`.
    pub fn chain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let gens: Vec<_> = (1..names.len()).map(|i| (i - 1, i)).collect();
        Self::new(
            None,
            names.iter().map(|s| s.as_ref().to_string()).collect(),
            &gens,
        )
    }

    pub fn label(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn name(&self, x: usize) -> &str {
        &self.0.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.0.up[x].contains(y)
    }

    pub fn up(&self, x: usize) -> PointSet {
        self.0.up[x]
    }

    pub fn down(&self, x: usize) -> PointSet {
        self.0.down[x]
    }

    /// Upward closure of a set.
    pub fn up_closure(&self, s: PointSet) -> PointSet {
        s.iter()
            .fold(PointSet::EMPTY, |acc, x| acc.union(self.up(x)))
    }

    pub fn down_closure(&self, s: PointSet) -> PointSet {
        s.iter()
            .fold(PointSet::EMPTY, |acc, x| acc.union(self.down(x)))
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        s.is_subset(self.all()) && self.up_closure(s) == s
    }

    pub fn check_open(&self, s: PointSet) -> Result<()> {
        if self.is_open(s) {
            Ok(())
        } else {
            Err(Error::NotOpen(self.format_set(s)))
        }
    }

    /// Pairs `(x, y)` with `x < y` strictly.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points().flat_map(move |x| {
            self.up(x)
                .iter()
                .filter(move |&y| y != x)
                .map(move |y| (x, y))
        })
    }

    /// Covering pairs `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .filter(|&(x, y)| {
                let between = self.up(x).intersection(self.down(y));
                between.len() == 2
            })
            .collect()
    }

    /// All open sets, ordered by size then by bitmask. Computed once.
    pub fn open_sets(&self) -> &[PointSet] {
        self.0.opens.get_or_init(|| {
            let mut opens = up_sets(self.len(), |x| self.up(x));
            opens.sort_by_key(|s| (s.len(), s.0));
            opens
        })
    }

    pub fn open_position(&self, s: PointSet) -> Option<usize> {
        self.open_sets().iter().position(|&o| o == s)
    }

    pub fn parse_set(&self, text: &str) -> Result<PointSet> {
        let mut s = PointSet::EMPTY;
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            s.insert(self.index(tok)?);
        }
        Ok(s)
    }

    /// `a,b,c` in point-index order.
    pub fn format_set(&self, s: PointSet) -> String {
        s.iter().map(|i| self.name(i)).collect::<Vec<_>>().join(",")
    }

    /// Renders the space in the poset file format, listing covering pairs.
    pub fn to_poset_text(&self) -> String {
        let mut out = String::new();
        if let Some(n) = self.label() {
            out.push_str(&format!("space {n}\n"));
        }
        for x in self.points() {
            out.push_str(&format!("point {}\n", self.name(x)));
        }
        for (x, y) in self.covers() {
            out.push_str(&format!("le {} {}\n", self.name(x), self.name(y)));
        }
        out
    }
}

/// Enumerates the up-sets of an order on `0..n` given by `up(x)`. Points are
/// decided from the top down so that every branch stays upward closed.
pub(crate) fn up_sets(n: usize, up: impl Fn(usize) -> PointSet) -> Vec<PointSet> {
    // Order points so that every strict upper bound of x precedes x.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| up(x).len());
    let mut out = Vec::new();
    fn go(
        k: usize,
        order: &[usize],
        cur: PointSet,
        up: &dyn Fn(usize) -> PointSet,
        out: &mut Vec<PointSet>,
    ) {
        if k == order.len() {
            out.push(cur);
            return;
        }
        let x = order[k];
        go(k + 1, order, cur, up, out);
        let mut above = up(x);
        above.0 &= !(1 << x);
        if above.is_subset(cur) {
            let mut with = cur;
            with.insert(x);
            go(k + 1, order, with, up, out);
        }
    }
    go(0, &order, PointSet::EMPTY, &up, &mut out);
    out
}

/// Reads the poset file format: directives `space <name>`, `point <id>`,
/// `le <id> <id>`, separated by newlines or `;`, with `#` comments.
pub fn load_space(text: &str) -> Result<FinSpace> {
    let mut name = None;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut gens = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for directive in line.split(';') {
            let start = offset;
            offset += directive.len() + 1;
            let toks = tokens(directive, start);
            let Some(&(col0, head)) = toks.first() else {
                continue;
            };
            let err = |col: usize, msg: String| Error::Parse {
                line: line_no + 1,
                col: col + 1,
                msg,
            };
            let arg = |i: usize| -> Result<(usize, &str)> {
                let (c, t) = *toks
                    .get(i)
                    .ok_or_else(|| err(col0, format!("'{head}' expects {i} argument(s)")))?;
                if !is_ident(t) {
                    return Err(err(c, format!("invalid identifier '{t}'")));
                }
                Ok((c, t))
            };
            let arity = match head {
                "space" => 1,
                "point" => 1,
                "le" => 2,
                other => return Err(err(col0, format!("unknown directive '{other}'"))),
            };
            if toks.len() > arity + 1 {
                let (c, t) = toks[arity + 1];
                return Err(err(c, format!("unexpected token '{t}'")));
            }
            match head {
                "space" => {
                    let (c, t) = arg(1)?;
                    if name.is_some() || !names.is_empty() {
                        return Err(err(c, "space header must come first".into()));
                    }
                    name = Some(t.to_string());
                }
                "point" => {
                    let (c, t) = arg(1)?;
                    if index.contains_key(t) {
                        return Err(err(c, Error::DuplicatePoint(t.to_string()).to_string()));
                    }
                    index.insert(t.to_string(), names.len());
                    names.push(t.to_string());
                }
                _ => {
                    let (c1, a) = arg(1)?;
                    let (c2, b) = arg(2)?;
                    let ia = *index
                        .get(a)
                        .ok_or_else(|| err(c1, format!("unknown point '{a}'")))?;
                    let ib = *index
                        .get(b)
                        .ok_or_else(|| err(c2, format!("unknown point '{b}'")))?;
                    gens.push((ia, ib));
                }
            }
        }
    }
    FinSpace::new(name, names, &gens)
}

/// Whitespace-separated tokens with their 0-based columns.
pub(crate) fn tokens(s: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((base + st, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((base + st, &s[st..]));
    }
    out
}

pub fn is_ident(t: &str) -> bool {
    !t.is_empty() && t.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// A monotone (equivalently, continuous) map between finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousMap {
    source: FinSpace,
    target: FinSpace,
    graph: Vec<usize>,
}

impl ContinuousMap {
    pub fn new(source: FinSpace, target: FinSpace, graph: Vec<usize>) -> Result<Self> {
        if graph.len() != source.len() {
            return Err(Error::Incomplete(format!(
                "map defines {} of {} source points",
                graph.len(),
                source.len()
            )));
        }
        if let Some(&bad) = graph.iter().find(|&&y| y >= target.len()) {
            return Err(Error::UnknownPoint(format!("#{bad}")));
        }
        for (x, y) in source.strict_pairs() {
            if !target.le(graph[x], graph[y]) {
                return Err(Error::NonMonotone {
                    what: "map".into(),
                    lo: source.name(x).into(),
                    hi: source.name(y).into(),
                });
            }
        }
        Ok(ContinuousMap {
            source,
            target,
            graph,
        })
    }

    /// The `.map` text read by [`ContinuousMap::load`].
    pub fn to_map_text(&self) -> String {
        self.source
            .points()
            .map(|p| format!("{} -> {}\n", self.source.name(p), self.target.name(self.graph[p])))
            .collect()
    }

    pub fn identity(s: &FinSpace) -> Self {
        ContinuousMap {
            source: s.clone(),
            target: s.clone(),
            graph: s.points().collect(),
        }
    }

    pub fn constant(source: &FinSpace, target: &FinSpace, y: usize) -> Self {
        ContinuousMap {
            source: source.clone(),
            target: target.clone(),
            graph: vec![y; source.len()],
        }
    }

    pub fn source(&self) -> &FinSpace {
        &self.source
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.graph[x]
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    pub fn preimage(&self, s: PointSet) -> PointSet {
        self.source
            .points()
            .filter(|&x| s.contains(self.graph[x]))
            .collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ContinuousMap) -> Result<ContinuousMap> {
        if self.target != other.source {
            return Err(Error::SpaceMismatch("composed maps do not meet".into()));
        }
        Ok(ContinuousMap {
            source: self.source.clone(),
            target: other.target.clone(),
            graph: self.graph.iter().map(|&y| other.graph[y]).collect(),
        })
    }

    /// Reads lines `<x> -> <y>`; every source point must be assigned.
    pub fn load(source: &FinSpace, target: &FinSpace, text: &str) -> Result<Self> {
        let mut graph = vec![None; source.len()];
        for (line_no, x, rhs, col) in arrow_lines(text)? {
            let xi = source.index(x).map_err(|e| Error::Parse {
                line: line_no,
                col: 1,
                msg: e.to_string(),
            })?;
            let yi = target.index(rhs).map_err(|e| Error::Parse {
                line: line_no,
                col,
                msg: e.to_string(),
            })?;
            if graph[xi].replace(yi).is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    col: 1,
                    msg: format!("point '{x}' mapped twice"),
                });
            }
        }
        let graph = collect_total(source, graph)?;
        ContinuousMap::new(source.clone(), target.clone(), graph)
    }

    /// Every monotone map between two spaces.
    pub fn enumerate(source: &FinSpace, target: &FinSpace) -> Vec<ContinuousMap> {
        let mut out = Vec::new();
        let mut graph = vec![0; source.len()];
        fn go(
            x: usize,
            s: &FinSpace,
            t: &FinSpace,
            graph: &mut Vec<usize>,
            out: &mut Vec<ContinuousMap>,
        ) {
            if x == s.len() {
                out.push(ContinuousMap {
                    source: s.clone(),
                    target: t.clone(),
                    graph: graph.clone(),
                });
                return;
            }
            for y in t.points() {
                let ok = (0..x).all(|z| {
                    (!s.le(z, x) || t.le(graph[z], y)) && (!s.le(x, z) || t.le(y, graph[z]))
                });
                if ok {
                    graph[x] = y;
                    go(x + 1, s, t, graph, out);
                }
            }
        }
        go(0, source, target, &mut graph, &mut out);
        out
    }
}

/// Splits `lhs -> rhs` lines, skipping blanks and `#` comments. Yields
/// `(line, lhs, rhs, rhs column)` with 1-based positions.
pub(crate) fn arrow_lines(text: &str) -> Result<Vec<(usize, &str, &str, usize)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(pos) = line.find("->") else {
            return Err(Error::Parse {
                line: i + 1,
                col: 1,
                msg: "expected '<point> -> <value>'".into(),
            });
        };
        let lhs = line[..pos].trim();
        let rhs_raw = &line[pos + 2..];
        let rhs = rhs_raw.trim();
        let col = pos + 3 + (rhs_raw.len() - rhs_raw.trim_start().len());
        out.push((i + 1, lhs, rhs, col));
    }
    Ok(out)
}

pub(crate) fn collect_total<T>(space: &FinSpace, vals: Vec<Option<T>>) -> Result<Vec<T>> {
    let missing: Vec<_> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| space.name(i).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Incomplete(format!(
            "no entry for point(s) {}",
            missing.join(",")
        )));
    }
    Ok(vals.into_iter().flatten().collect())
}

/// The product space with the componentwise order. Point `(x, y)` has index
/// `x * t.len() + y` and name `(x,y)`.
pub fn product_space(s: &FinSpace, t: &FinSpace) -> FinSpace {
    let m = t.len();
    let mut names = Vec::with_capacity(s.len() * m);
    for x in s.points() {
        for y in t.points() {
            names.push(format!("({},{})", s.name(x), t.name(y)));
        }
    }
    let mut gens = Vec::new();
    for (x, x2) in s.covers() {
        for y in t.points() {
            gens.push((x * m + y, x2 * m + y));
        }
    }
    for x in s.points() {
        for (y, y2) in t.covers() {
            gens.push((x * m + y, x * m + y2));
        }
    }
    FinSpace::new(None, names, &gens).expect("product of T0 spaces is T0")
}

/// A set of open sets of a space, one bit per position in
/// [`FinSpace::open_sets`].
pub type OpenFamily = u128;

/// The point topology and the Scott topology on the open-set lattice of `s`,
/// each as a sorted list of families of opens. Requires at most 128 opens.
pub fn topologies_on_opens(s: &FinSpace) -> Result<(Vec<OpenFamily>, Vec<OpenFamily>)> {
    let opens = s.open_sets();
    let k = opens.len();
    if k > 128 {
        return Err(Error::Precondition(format!(
            "{k} open sets exceed the 128 supported"
        )));
    }
    let all: OpenFamily = if k == 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    };
    let containing = |x: usize| -> OpenFamily {
        opens
            .iter()
            .enumerate()
            .filter(|(_, u)| u.contains(x))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    };

    // Point topology: unions of finite intersections of the subbasic families.
    let subbasis: Vec<OpenFamily> = s.points().map(containing).collect();
    let mut basis = BTreeSet::new();
    basis.insert(all);
    for f in 1u64..(1u64 << s.len().min(20)) {
        let inter = PointSet(f).iter().fold(all, |acc, x| acc & subbasis[x]);
        basis.insert(inter);
    }
    let mut point = BTreeSet::new();
    point.insert(0u128);
    for b in basis {
        let extra: Vec<_> = point.iter().map(|f| f | b).collect();
        point.extend(extra);
    }

    // Scott topology: up-sets for inclusion. On a finite poset every up-set
    // is Scott open.
    let incl_up = |i: usize| -> u64 {
        (0..k)
            .filter(|&j| opens[i].is_subset(opens[j]))
            .fold(0, |a, j| a | 1 << j)
    };
    let scott: Vec<OpenFamily> = if k <= 64 {
        up_sets(k, |i| PointSet(incl_up(i)))
            .into_iter()
            .map(|p| p.0 as u128)
            .collect()
    } else {
        up_sets_wide(opens)
    };
    let mut scott = scott;
    scott.sort_unstable();
    Ok((point.into_iter().collect(), scott))
}

fn up_sets_wide(opens: &[PointSet]) -> Vec<OpenFamily> {
    let k = opens.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(opens[i].len()));
    let mut out = Vec::new();
    fn go(p: usize, order: &[usize], opens: &[PointSet], cur: u128, out: &mut Vec<u128>) {
        if p == order.len() {
            out.push(cur);
            return;
        }
        let i = order[p];
        go(p + 1, order, opens, cur, out);
        let ok =
            (0..opens.len()).all(|j| j == i || !opens[i].is_subset(opens[j]) || cur >> j & 1 == 1);
        if ok {
            go(p + 1, order, opens, cur | 1 << i, out);
        }
    }
    go(0, &order, opens, 0, &mut out);
    out
}

/// A finite lattice: a space whose order has all binary joins and meets and
/// a bottom and a top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLattice {
    space: FinSpace,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

/// Verifies lattice-hood and builds the join/meet tables. Joins are checked
/// first, so a discrete two-point space reports its missing join.
pub fn check_lattice(s: &FinSpace) -> Result<FinLattice> {
    let n = s.len();
    let lub = |x: usize, y: usize| -> Option<usize> {
        let uppers = s.up(x).intersection(s.up(y));
        uppers.iter().find(|&z| uppers.is_subset(s.up(z)))
    };
    let glb = |x: usize, y: usize| -> Option<usize> {
        let lowers = s.down(x).intersection(s.down(y));
        lowers.iter().find(|&z| lowers.is_subset(s.down(z)))
    };
    let mut join = vec![vec![0; n]; n];
    for x in 0..n {
        for y in x..n {
            let z = lub(x, y).ok_or_else(|| Error::NoJoin(s.name(x).into(), s.name(y).into()))?;
            join[x][y] = z;
            join[y][x] = z;
        }
    }
    let bottom = s
        .points()
        .find(|&b| s.up(b) == s.all())
        .ok_or(Error::NoBottom)?;
    let top = s
        .points()
        .find(|&t| s.down(t) == s.all())
        .ok_or(Error::NoTop)?;
    let mut meet = vec![vec![0; n]; n];
    for x in 0..n {
        for y in x..n {
            let z = glb(x, y).ok_or_else(|| Error::NoMeet(s.name(x).into(), s.name(y).into()))?;
            meet[x][y] = z;
            meet[y][x] = z;
        }
    }
    Ok(FinLattice {
        space: s.clone(),
        join,
        meet,
        bottom,
        top,
    })
}

impl FinLattice {
    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.space.le(x, y)
    }

    /// Join of a set; the bottom for the empty set.
    pub fn join_all(&self, s: PointSet) -> usize {
        s.iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }
}
