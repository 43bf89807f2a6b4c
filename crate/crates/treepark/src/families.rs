//! Tree families and exhaustive generation of their labelled trees.
//!
//! Plane-type families (ordered, d-ary, d-bundled, Motzkin, strict binary) are
//! generated as unlabelled shapes times all `n!` labellings; a plane shape has no
//! nontrivial automorphism, so every labelling is a distinct tree. Unordered
//! families are generated from parent functions on `[n]`, children kept sorted.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{big, binomial, factorial, int, rat};
use crate::series::Expr;

/// A simple family of trees, described by its degree weights `φ_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Ordered,
    Unordered,
    DAry(u32),
    DBundled(u32),
    Motzkin,
    StrictBinary,
    UnorderedUnaryBinary,
    Mobile,
}

impl Family {
    /// The four families whose attachment count depends on the size only.
    pub const COMBINATORIAL: [Family; 4] = [
        Family::Ordered,
        Family::Unordered,
        Family::DAry(2),
        Family::DBundled(2),
    ];

    pub fn validate(self) -> Result<Self> {
        match self {
            Family::DAry(0) | Family::DBundled(0) => Err(domain("d must be at least 1")),
            f => Ok(f),
        }
    }

    /// `φ_k`, the weight of a node with `k` children.
    pub fn weight(self, k: usize) -> BigRational {
        match self {
            Family::Ordered => int(1),
            Family::Unordered => BigRational::new(1.into(), factorial(k).into()),
            Family::DAry(d) => big(&binomial(d as usize, k)),
            Family::DBundled(d) => big(&binomial(k + d as usize - 1, k)),
            Family::Motzkin => int((k <= 2) as i64),
            Family::StrictBinary => int((k == 0 || k == 2) as i64),
            Family::UnorderedUnaryBinary => match k {
                0 | 1 => int(1),
                2 => rat(1, 2),
                _ => int(0),
            },
            Family::Mobile if k == 0 => int(1),
            Family::Mobile => rat(1, k as i64),
        }
    }

    /// `φ(t)` as an expression in the variable `Q`.
    pub fn phi(self) -> Expr {
        let t = Expr::q();
        match self {
            Family::Ordered => (1 - t).recip(),
            Family::Unordered => t.exp(),
            Family::DAry(d) => (1 + t).powi(d as i64),
            Family::DBundled(d) => (1 - t).powi(-(d as i64)),
            Family::Motzkin => 1 + t.clone() + t.powi(2),
            Family::StrictBinary => 1 + t.powi(2),
            Family::UnorderedUnaryBinary => 1 + t.clone() + Expr::rat(1, 2) * t.powi(2),
            Family::Mobile => 1 - (1 - t).ln(),
        }
    }

    /// `(a, b)` with `A(T) = a·n + b` for every size-`n` tree, when it exists.
    pub fn attachment_law(self) -> Option<(BigRational, BigRational)> {
        match self {
            Family::Ordered => Some((int(2), int(-1))),
            Family::Unordered => Some((int(1), int(0))),
            Family::DAry(d) => Some((int(d as i64 - 1), int(1))),
            Family::DBundled(d) => Some((int(d as i64 + 1), int(-1))),
            _ => None,
        }
    }

    /// Closed form for the number `T_n` of size-`n` trees.
    pub fn tree_count(self, n: usize) -> Option<BigUint> {
        if n == 0 {
            return None;
        }
        let f = factorial(n - 1);
        match self {
            Family::Ordered => Some(f * binomial(2 * n - 2, n - 1)),
            Family::Unordered => Some(BigUint::from(n).pow(n as u32 - 1)),
            Family::DAry(d) => Some(f * binomial(d as usize * n, n - 1)),
            Family::DBundled(d) => Some(f * binomial((d as usize + 1) * n - 2, n - 1)),
            _ => None,
        }
    }

    pub fn is_combinatorial(self) -> bool {
        self.attachment_law().is_some()
    }

    pub fn is_generatable(self) -> bool {
        self != Family::Mobile
    }

    fn is_unordered(self) -> bool {
        matches!(self, Family::Unordered | Family::UnorderedUnaryBinary)
    }

    fn max_children(self) -> Option<usize> {
        match self {
            Family::DAry(d) => Some(d as usize),
            Family::Motzkin | Family::StrictBinary | Family::UnorderedUnaryBinary => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Ordered => write!(f, "ordered"),
            Family::Unordered => write!(f, "unordered"),
            Family::DAry(d) => write!(f, "dary-{d}"),
            Family::DBundled(d) => write!(f, "dbundled-{d}"),
            Family::Motzkin => write!(f, "motzkin"),
            Family::StrictBinary => write!(f, "strict-binary"),
            Family::UnorderedUnaryBinary => write!(f, "unary-binary"),
            Family::Mobile => write!(f, "mobile"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) names plus `binary` for `dary-2`;
    /// `dary`/`dbundled` take `-d` or `:d`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (head, d) = match s.split_once(['-', ':']) {
            Some((h, d)) if h == "dary" || h == "dbundled" => {
                let d = d
                    .parse::<u32>()
                    .map_err(|_| domain(format!("bad arity in {s:?}")))?;
                (h.to_string(), Some(d))
            }
            _ => (s.clone(), None),
        };
        let fam = match (head.as_str(), d) {
            ("ordered", None) => Family::Ordered,
            ("unordered" | "cayley", None) => Family::Unordered,
            ("binary", None) => Family::DAry(2),
            ("dary", Some(d)) => Family::DAry(d),
            ("dbundled", Some(d)) => Family::DBundled(d),
            ("motzkin", None) => Family::Motzkin,
            ("strict-binary", None) => Family::StrictBinary,
            ("unary-binary", None) => Family::UnorderedUnaryBinary,
            ("mobile", None) => Family::Mobile,
            _ => return Err(domain(format!("unknown family {s:?}"))),
        };
        fam.validate()
    }
}

/// How the children of one node are arranged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Layout<T> {
    /// Ordered list (ordered, Motzkin, strict binary).
    Seq(Vec<T>),
    /// `d` ordered lists (d-bundled).
    Bundles(Vec<Vec<T>>),
    /// `d` positions, each empty or occupied (d-ary).
    Slots(Vec<Option<T>>),
    /// Label-sorted set (unordered families).
    Set(Vec<T>),
}

impl<T> Layout<T> {
    fn empty(family: Family) -> Self {
        match family {
            Family::DBundled(d) => Layout::Bundles((0..d).map(|_| Vec::new()).collect()),
            Family::DAry(d) => Layout::Slots((0..d).map(|_| None).collect()),
            f if f.is_unordered() => Layout::Set(Vec::new()),
            _ => Layout::Seq(Vec::new()),
        }
    }

    pub fn children(&self) -> Box<dyn Iterator<Item = &T> + '_> {
        match self {
            Layout::Seq(v) | Layout::Set(v) => Box::new(v.iter()),
            Layout::Bundles(b) => Box::new(b.iter().flatten()),
            Layout::Slots(s) => Box::new(s.iter().flatten()),
        }
    }

    pub fn len(&self) -> usize {
        self.children().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> Layout<U> {
        match self {
            Layout::Seq(v) => Layout::Seq(v.iter().map(f).collect()),
            Layout::Set(v) => Layout::Set(v.iter().map(f).collect()),
            Layout::Bundles(b) => {
                let mut out = Vec::with_capacity(b.len());
                for v in b {
                    out.push(v.iter().map(&mut *f).collect());
                }
                Layout::Bundles(out)
            }
            Layout::Slots(s) => Layout::Slots(s.iter().map(|x| x.as_ref().map(&mut *f)).collect()),
        }
    }
}

/// A rooted tree on labels `1..=n`, edges oriented toward the root.
///
/// Node `v` is stored at index `v - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelledTree {
    parent: Vec<Option<usize>>,
    kids: Vec<Layout<usize>>,
    root: usize,
}

impl LabelledTree {
    pub fn single() -> Self {
        LabelledTree {
            parent: vec![None],
            kids: vec![Layout::Seq(Vec::new())],
            root: 0,
        }
    }

    /// Builds a tree from per-node child layouts (labels, 1-based).
    pub fn from_layouts(layouts: Vec<Layout<usize>>) -> Result<Self> {
        let n = layouts.len();
        let mut parent = vec![None; n];
        let mut kids = Vec::with_capacity(n);
        for (v, layout) in layouts.iter().enumerate() {
            for &c in layout.children() {
                if c == 0 || c > n {
                    return Err(domain(format!("label {c} outside 1..={n}")));
                }
                if parent[c - 1].replace(v).is_some() {
                    return Err(domain(format!("node {c} has two parents")));
                }
            }
            kids.push(layout.map(&mut |c| c - 1));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        let [root] = roots[..] else {
            return Err(domain(format!("expected one root, found {}", roots.len())));
        };
        let t = LabelledTree { parent, kids, root };
        if t.preorder().len() != n {
            return Err(domain("parent relation has a cycle"));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root + 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v - 1].map(|p| p + 1)
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.kids[v - 1].children().map(|c| c + 1).collect()
    }

    pub fn layout(&self, v: usize) -> Layout<usize> {
        self.kids[v - 1].map(&mut |c| c + 1)
    }

    pub(crate) fn parent_idx(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Node indices (0-based) in preorder.
    pub(crate) fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            let ch: Vec<usize> = self.kids[v].children().copied().collect();
            stack.extend(ch.into_iter().rev());
        }
        out
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .filter_map(|v| self.parent[v].map(|p| (v + 1, p + 1)))
            .collect()
    }

    /// Number of nodes without children.
    pub fn count_leaves(&self) -> usize {
        self.kids.iter().filter(|k| k.is_empty()).count()
    }

    /// Canonical encoding of the underlying unlabelled, unordered rooted tree.
    ///
    /// Every parking count is invariant under relabelling and reordering of
    /// children, so this is a valid cache key for per-tree counts.
    pub fn shape_key(&self) -> Vec<u8> {
        fn enc(t: &LabelledTree, v: usize) -> Vec<u8> {
            let mut parts: Vec<Vec<u8>> = t.kids[v].children().map(|&c| enc(t, c)).collect();
            parts.sort_unstable();
            let mut out = vec![b'('];
            parts.into_iter().for_each(|p| out.extend(p));
            out.push(b')');
            out
        }
        enc(self, self.root)
    }

    /// Checks the structural rules of `family`.
    pub fn belongs_to(&self, family: Family) -> bool {
        let n = self.n();
        self.kids.iter().enumerate().all(|(v, layout)| {
            let k = layout.len();
            let kids_ok = layout
                .children()
                .all(|&c| c < n && self.parent[c] == Some(v));
            let shape_ok = match (family, layout) {
                (Family::Ordered, Layout::Seq(_)) => true,
                (Family::Motzkin, Layout::Seq(_)) => k <= 2,
                (Family::StrictBinary, Layout::Seq(_)) => k == 0 || k == 2,
                (Family::DAry(d), Layout::Slots(s)) => s.len() == d as usize,
                (Family::DBundled(d), Layout::Bundles(b)) => b.len() == d as usize,
                (Family::Unordered, Layout::Set(s)) => s.windows(2).all(|w| w[0] < w[1]),
                (Family::UnorderedUnaryBinary, Layout::Set(s)) => {
                    k <= 2 && s.windows(2).all(|w| w[0] < w[1])
                }
                (_, _) if k == 0 && n == 1 => true,
                _ => false,
            };
            kids_ok && shape_ok
        }) && self.kids.iter().map(Layout::len).sum::<usize>() + 1 == n
    }

    /// All distinct trees obtained by attaching a new node `n + 1`.
    pub fn extensions(&self, family: Family) -> Vec<LabelledTree> {
        let n = self.n();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let base = self.normalized(family);
        for v in 0..n {
            for layout in insertions(&base.kids[v], n) {
                let mut t = base.clone();
                t.kids[v] = layout;
                t.kids.push(Layout::empty(family));
                t.parent.push(Some(v));
                if t.belongs_to(family) && seen.insert(t.to_string()) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Number of distinct ways to attach a new node.
    pub fn attachment_points(&self, family: Family) -> usize {
        self.extensions(family).len()
    }

    /// `Σ_v (k_v + 1)·φ_{k_v+1}/φ_{k_v}` over nodes with `k_v` children.
    pub fn attachment_weight(&self, family: Family) -> BigRational {
        self.kids
            .iter()
            .map(|l| {
                let k = l.len();
                int(k as i64 + 1) * family.weight(k + 1) / family.weight(k)
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// The single-node tree gets the family's empty layout.
    fn normalized(&self, family: Family) -> LabelledTree {
        let mut t = self.clone();
        for k in t.kids.iter_mut() {
            if k.is_empty() {
                *k = Layout::empty(family);
            }
        }
        t
    }

    /// Parses the text form written by [`Display`](fmt::Display).
    pub fn parse(family: Family, s: &str) -> Result<Self> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
            family,
        };
        let mut layouts: Vec<(usize, Layout<usize>)> = Vec::new();
        p.node(&mut layouts)?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        let n = layouts.len();
        let mut by_label: Vec<Option<Layout<usize>>> = vec![None; n];
        for (label, layout) in layouts {
            if label == 0 || label > n || by_label[label - 1].is_some() {
                return Err(domain(format!("labels must be exactly 1..={n}")));
            }
            by_label[label - 1] = Some(layout);
        }
        let t = LabelledTree::from_layouts(by_label.into_iter().map(Option::unwrap).collect())?;
        let t = t.normalized(family);
        if !t.belongs_to(family) {
            return Err(domain(format!("tree is not a member of {family}")));
        }
        Ok(t)
    }
}

fn insertions(layout: &Layout<usize>, new: usize) -> Vec<Layout<usize>> {
    let mut out = Vec::new();
    match layout {
        Layout::Seq(v) => {
            for i in 0..=v.len() {
                let mut w = v.clone();
                w.insert(i, new);
                out.push(Layout::Seq(w));
            }
        }
        Layout::Set(v) => {
            let mut w = v.clone();
            w.push(new);
            out.push(Layout::Set(w));
        }
        Layout::Bundles(b) => {
            for (j, bundle) in b.iter().enumerate() {
                for i in 0..=bundle.len() {
                    let mut w = b.clone();
                    w[j].insert(i, new);
                    out.push(Layout::Bundles(w));
                }
            }
        }
        Layout::Slots(s) => {
            for (j, slot) in s.iter().enumerate() {
                if slot.is_none() {
                    let mut w = s.clone();
                    w[j] = Some(new);
                    out.push(Layout::Slots(w));
                }
            }
        }
    }
    out
}

impl fmt::Display for LabelledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &LabelledTree, v: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}", v + 1)?;
            if t.kids[v].is_empty() {
                return Ok(());
            }
            write!(f, "(")?;
            match &t.kids[v] {
                Layout::Seq(c) | Layout::Set(c) => {
                    for (i, &c) in c.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        go(t, c, f)?;
                    }
                }
                Layout::Bundles(b) => {
                    for (j, bundle) in b.iter().enumerate() {
                        if j > 0 {
                            write!(f, "|")?;
                        }
                        for (i, &c) in bundle.iter().enumerate() {
                            if i > 0 {
                                write!(f, " ")?;
                            }
                            go(t, c, f)?;
                        }
                    }
                }
                Layout::Slots(s) => {
                    let mut first = true;
                    for (j, c) in s.iter().enumerate() {
                        if let Some(c) = c {
                            if !first {
                                write!(f, " ")?;
                            }
                            first = false;
                            write!(f, "{}:", j + 1)?;
                            go(t, *c, f)?;
                        }
                    }
                }
            }
            write!(f, ")")
        }
        go(self, self.root, f)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    family: Family,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected a label"))
    }

    fn node(&mut self, out: &mut Vec<(usize, Layout<usize>)>) -> Result<usize> {
        self.skip_ws();
        let label = self.number()?;
        let slot = out.len();
        out.push((label, Layout::empty(self.family)));
        if self.peek() != Some(b'(') {
            return Ok(label);
        }
        self.pos += 1;
        let layout = match self.family {
            Family::DBundled(d) => {
                let mut bundles = vec![Vec::new()];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b')') => break,
                        Some(b'|') => {
                            self.pos += 1;
                            bundles.push(Vec::new());
                        }
                        _ => {
                            let c = self.node(out)?;
                            bundles.last_mut().unwrap().push(c);
                        }
                    }
                }
                if bundles.len() != d as usize {
                    return Err(self.err("wrong number of bundles"));
                }
                Layout::Bundles(bundles)
            }
            Family::DAry(d) => {
                let mut slots = vec![None; d as usize];
                loop {
                    self.skip_ws();
                    if self.peek() == Some(b')') {
                        break;
                    }
                    let j = self.number()?;
                    if self.peek() != Some(b':')
                        || j == 0
                        || j > d as usize
                        || slots[j - 1].is_some()
                    {
                        return Err(self.err("expected a free position tag"));
                    }
                    self.pos += 1;
                    slots[j - 1] = Some(self.node(out)?);
                }
                Layout::Slots(slots)
            }
            _ => {
                let mut kids = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(b')') {
                        break;
                    }
                    if self.peek().is_none() {
                        return Err(self.err("unclosed parenthesis"));
                    }
                    kids.push(self.node(out)?);
                }
                if self.family.is_unordered() {
                    Layout::Set(kids)
                } else {
                    Layout::Seq(kids)
                }
            }
        };
        self.pos += 1;
        out[slot].1 = layout;
        Ok(label)
    }
}

/// An unlabelled plane shape flattened in preorder.
#[derive(Clone, Debug)]
struct FlatShape {
    parent: Vec<Option<usize>>,
    kids: Vec<Layout<usize>>,
}

#[derive(Debug)]
struct ShapeNode {
    size: usize,
    layout: Layout<Arc<ShapeNode>>,
}

impl ShapeNode {
    fn flatten(&self) -> FlatShape {
        fn go(s: &ShapeNode, parent: Option<usize>, out: &mut FlatShape) {
            let me = out.parent.len();
            out.parent.push(parent);
            out.kids.push(Layout::Seq(Vec::new()));
            let mut next = me + 1;
            let layout = s.layout.map(&mut |c: &Arc<ShapeNode>| {
                let idx = next;
                next += c.size;
                idx
            });
            out.kids[me] = layout;
            for c in s.layout.children() {
                go(c, Some(me), out);
            }
        }
        let mut out = FlatShape {
            parent: Vec::new(),
            kids: Vec::new(),
        };
        go(self, None, &mut out);
        out
    }
}

/// Unlabelled plane shapes of sizes `1..=n`, indexed by size.
fn plane_shapes(family: Family, n: usize) -> Vec<Vec<Arc<ShapeNode>>> {
    let max_kids = family.max_children();
    let mut shapes: Vec<Vec<Arc<ShapeNode>>> = vec![Vec::new(); n + 1];
    // forests[m][len]: sequences of `len` shapes with total size m
    let mut forests: Vec<Vec<Vec<Vec<Arc<ShapeNode>>>>> = vec![vec![vec![Vec::new()]]];
    for size in 1..=n {
        let m = size - 1;
        let layouts: Vec<Layout<Arc<ShapeNode>>> = match family {
            Family::DAry(d) => weak_compositions(m, d as usize)
                .into_iter()
                .flat_map(|parts| {
                    parts
                        .iter()
                        .map(|&p| {
                            if p == 0 {
                                vec![None]
                            } else {
                                shapes[p].iter().cloned().map(Some).collect()
                            }
                        })
                        .multi_cartesian_product()
                        .map(Layout::Slots)
                        .collect::<Vec<_>>()
                })
                .collect(),
            Family::DBundled(d) => weak_compositions(m, d as usize)
                .into_iter()
                .flat_map(|parts| {
                    parts
                        .iter()
                        .map(|&p| forests[p].iter().flatten().cloned().collect::<Vec<_>>())
                        .multi_cartesian_product()
                        .map(Layout::Bundles)
                        .collect::<Vec<_>>()
                })
                .collect(),
            _ => forests[m]
                .iter()
                .enumerate()
                .filter(|(len, _)| match family {
                    Family::StrictBinary => *len == 0 || *len == 2,
                    _ => max_kids.is_none_or(|k| *len <= k),
                })
                .flat_map(|(_, fs)| fs.iter().cloned().map(Layout::Seq))
                .collect(),
        };
        shapes[size] = layouts
            .into_iter()
            .map(|layout| Arc::new(ShapeNode { size, layout }))
            .collect();
        forests.push(extend_forests(&forests, &shapes, size));
    }
    shapes
}

/// Forests of total size `m`, grouped by number of trees.
fn extend_forests(
    forests: &[Vec<Vec<Vec<Arc<ShapeNode>>>>],
    shapes: &[Vec<Arc<ShapeNode>>],
    m: usize,
) -> Vec<Vec<Vec<Arc<ShapeNode>>>> {
    let mut by_len: Vec<Vec<Vec<Arc<ShapeNode>>>> = vec![Vec::new(); m + 1];
    for first in 1..=m {
        for s in &shapes[first] {
            for (len, rest) in forests[m - first].iter().enumerate() {
                for tail in rest {
                    let mut f = Vec::with_capacity(tail.len() + 1);
                    f.push(s.clone());
                    f.extend(tail.iter().cloned());
                    by_len[len + 1].push(f);
                }
            }
        }
    }
    by_len
}

fn weak_compositions(m: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    (0..=m)
        .flat_map(|first| {
            weak_compositions(m - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Number of unlabelled plane shapes of size `n`.
pub fn plane_shape_count(family: Family, n: usize) -> Result<usize> {
    if family.is_unordered() || !family.is_generatable() {
        return Err(domain(format!("{family} is not a plane family")));
    }
    Ok(plane_shapes(family.validate()?, n)[n].len())
}

/// Restartable stream of every labelled tree of one family and size.
#[derive(Clone)]
pub struct TreeStream {
    family: Family,
    n: usize,
    inner: StreamInner,
}

#[derive(Clone)]
enum StreamInner {
    Plane {
        shapes: Arc<Vec<FlatShape>>,
        idx: usize,
        perms: itertools::Permutations<std::ops::Range<usize>>,
    },
    Parent {
        root: usize,
        parent: Vec<usize>,
        done: bool,
    },
}

/// Every labelled tree of `family` with `n` nodes, each exactly once.
pub fn generate_trees(family: Family, n: usize) -> Result<TreeStream> {
    let family = family.validate()?;
    if n == 0 {
        return Err(domain("tree size must be at least 1"));
    }
    if !family.is_generatable() {
        return Err(Error::SeriesOnlyFamily(family));
    }
    let inner = if family.is_unordered() {
        StreamInner::Parent {
            root: 0,
            parent: vec![0; n],
            done: false,
        }
    } else {
        let shapes = plane_shapes(family, n)[n]
            .iter()
            .map(|s| s.flatten())
            .collect();
        StreamInner::Plane {
            shapes: Arc::new(shapes),
            idx: 0,
            perms: (0..n).permutations(n),
        }
    };
    Ok(TreeStream { family, n, inner })
}

impl TreeStream {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

impl Iterator for TreeStream {
    type Item = LabelledTree;

    fn next(&mut self) -> Option<LabelledTree> {
        let n = self.n;
        match &mut self.inner {
            StreamInner::Plane { shapes, idx, perms } => loop {
                let shape = shapes.get(*idx)?;
                if let Some(p) = perms.next() {
                    return Some(label_shape(shape, &p));
                }
                *idx += 1;
                *perms = (0..n).permutations(n);
            },
            StreamInner::Parent { root, parent, done } => {
                let max_kids = self.family.max_children();
                while !*done {
                    let candidate = parent_tree(*root, parent, max_kids);
                    advance_parent_function(root, parent, done, n);
                    if candidate.is_some() {
                        return candidate;
                    }
                }
                None
            }
        }
    }
}

fn label_shape(shape: &FlatShape, perm: &[usize]) -> LabelledTree {
    let n = perm.len();
    let mut parent = vec![None; n];
    let mut kids = vec![Layout::Seq(Vec::new()); n];
    for i in 0..n {
        parent[perm[i]] = shape.parent[i].map(|p| perm[p]);
        kids[perm[i]] = shape.kids[i].map(&mut |&c| perm[c]);
    }
    LabelledTree {
        parent,
        kids,
        root: perm[0],
    }
}

/// Odometer over (root, parent function on the other nodes).
fn advance_parent_function(root: &mut usize, parent: &mut [usize], done: &mut bool, n: usize) {
    for v in (0..n).rev() {
        if v == *root {
            continue;
        }
        parent[v] += 1;
        if parent[v] < n {
            return;
        }
        parent[v] = 0;
    }
    *root += 1;
    if *root == n {
        *done = true;
    }
}

fn parent_tree(root: usize, parent: &[usize], max_kids: Option<usize>) -> Option<LabelledTree> {
    let n = parent.len();
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if v != root {
            if parent[v] == v {
                return None;
            }
            kids[parent[v]].push(v);
        }
    }
    if max_kids.is_some_and(|k| kids.iter().any(|c| c.len() > k)) {
        return None;
    }
    // acyclic iff every node reaches the root
    let mut reach = vec![false; n];
    reach[root] = true;
    let mut stack = vec![root];
    let mut seen = 1;
    while let Some(v) = stack.pop() {
        for &c in &kids[v] {
            if !reach[c] {
                reach[c] = true;
                seen += 1;
                stack.push(c);
            }
        }
    }
    if seen != n {
        return None;
    }
    Some(LabelledTree {
        parent: (0..n).map(|v| (v != root).then(|| parent[v])).collect(),
        kids: kids.into_iter().map(Layout::Set).collect(),
        root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(f: Family, n: usize) -> usize {
        generate_trees(f, n).unwrap().count()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(Family::Ordered, 1), 1);
        assert_eq!(count(Family::Ordered, 3), 12);
        assert_eq!(count(Family::Unordered, 3), 9);
        assert_eq!(count(Family::DAry(2), 2), 4);
        assert_eq!(count(Family::DBundled(2), 2), 4);
    }

    #[test]
    fn mobile_is_series_only() {
        assert!(matches!(
            generate_trees(Family::Mobile, 3),
            Err(Error::SeriesOnlyFamily(Family::Mobile))
        ));
        assert!(matches!(
            generate_trees(Family::Ordered, 0),
            Err(Error::Domain(_))
        ));
        assert!(generate_trees(Family::DAry(0), 2).is_err());
    }

    #[test]
    fn attachment_examples() {
        let single = LabelledTree::single();
        assert_eq!(single.attachment_points(Family::Ordered), 1);
        for t in generate_trees(Family::Unordered, 4).unwrap() {
            assert_eq!(t.attachment_points(Family::Unordered), 4);
        }
        for t in generate_trees(Family::DAry(2), 3).unwrap() {
            assert_eq!(t.attachment_points(Family::DAry(2)), 4);
        }
    }

    #[test]
    fn leaves() {
        assert_eq!(LabelledTree::single().count_leaves(), 1);
        let chain = LabelledTree::parse(Family::Ordered, "1(2(3))").unwrap();
        assert_eq!(chain.count_leaves(), 1);
        let cherry = LabelledTree::parse(Family::Ordered, "1(2 3)").unwrap();
        assert_eq!(cherry.count_leaves(), 2);
    }

    #[test]
    fn serialization_round_trips() {
        for (f, s) in [
            (Family::Ordered, "3(1 2(4))"),
            (Family::DAry(2), "2(2:1(1:3))"),
            (Family::DBundled(2), "1(|2 3)"),
            (Family::Unordered, "4(1 2 3)"),
        ] {
            let t = LabelledTree::parse(f, s).unwrap();
            assert_eq!(t.to_string(), s);
            assert!(t.belongs_to(f));
        }
        assert!(LabelledTree::parse(Family::Unordered, "4(2 1 3)").is_err());
        assert!(LabelledTree::parse(Family::Ordered, "1(2 2)").is_err());
        assert!(LabelledTree::parse(Family::DAry(2), "1(3:2)").is_err());
        assert!(LabelledTree::parse(Family::Motzkin, "1(2 3 4)").is_err());
    }

    #[test]
    fn family_names_parse() {
        for f in [
            Family::Ordered,
            Family::Unordered,
            Family::DAry(3),
            Family::DBundled(2),
            Family::Motzkin,
            Family::StrictBinary,
            Family::UnorderedUnaryBinary,
            Family::Mobile,
        ] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!("binary".parse::<Family>().unwrap(), Family::DAry(2));
        assert_eq!("dary:3".parse::<Family>().unwrap(), Family::DAry(3));
        assert!("trinary".parse::<Family>().is_err());
    }

    #[test]
    fn shape_key_ignores_labels_and_order() {
        let a = LabelledTree::parse(Family::Ordered, "1(2(3) 4)").unwrap();
        let b = LabelledTree::parse(Family::Ordered, "4(3 1(2))").unwrap();
        let c = LabelledTree::parse(Family::Ordered, "1(2 3 4)").unwrap();
        assert_eq!(a.shape_key(), b.shape_key());
        assert_ne!(a.shape_key(), c.shape_key());
    }
}
