//! Knot and link presentations: PD codes, braid words, pretzel and twist
//! families, and the diagram operations the skein recursion consumes.
//!
//! PD convention: each crossing is a tuple `(a, b, c, d)` listed
//! counterclockwise from the incoming under-strand, so `a` is the incoming
//! under-arc and `c` the outgoing under-arc. The over-strand direction is
//! recovered from the arc numbering (arcs of a component are numbered
//! consecutively along the orientation). A crossing is positive exactly when
//! the over-strand runs `d -> b`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Planar diagram code. `free_loops` counts crossing-free components, which
/// arise from smoothing; an entirely empty code stands for the unknot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDCode {
    pub crossings: Vec<[u32; 4]>,
    #[serde(default)]
    pub free_loops: usize,
}

impl PDCode {
    pub fn empty() -> Self {
        Self { crossings: Vec::new(), free_loops: 0 }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Parse whitespace-separated `X[a,b,c,d]` tokens; `O` marks a
    /// crossing-free component.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut crossings = Vec::new();
        let mut free_loops = 0;
        for tok in text.split_whitespace() {
            if tok == "O" {
                free_loops += 1;
                continue;
            }
            let inner = tok
                .strip_prefix("X[")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("expected X[a,b,c,d] token, got {tok:?}"),
                })?;
            let parts: Vec<u32> = inner
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("bad arc label in {tok:?}"),
                })?;
            if parts.len() != 4 {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("{tok:?} does not have four arc labels"),
                });
            }
            crossings.push([parts[0], parts[1], parts[2], parts[3]]);
        }
        let pd = Self { crossings, free_loops };
        pd.validate()?;
        Ok(pd)
    }

    /// Check all PD invariants by resolving the orientation structure.
    pub fn validate(&self) -> Result<(), Error> {
        Diagram::from_pd(self).map(|_| ())
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.crossings {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "X[{},{},{},{}]", x[0], x[1], x[2], x[3])?;
            first = false;
        }
        for _ in 0..self.free_loops {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "O")?;
            first = false;
        }
        if first {
            write!(f, "")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub letters: Vec<i32>,
    pub strand_count: usize,
}

impl BraidWord {
    pub fn new(letters: Vec<i32>, strand_count: usize) -> Result<Self, Error> {
        if strand_count < 1 {
            return Err(Error::InvalidDiagram("braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strand_count {
                return Err(Error::InvalidDiagram(format!(
                    "braid letter {l} out of range for {strand_count} strands"
                )));
            }
        }
        Ok(Self { letters, strand_count })
    }

    /// Parse "strands: l1 l2 ...", e.g. `"2: 1 1 1"`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let (head, tail) = text.split_once(':').ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "expected 'strands: letters...'".into(),
        })?;
        let strand_count: usize = head.trim().parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("bad strand count {head:?}"),
        })?;
        let letters: Vec<i32> = tail
            .split_whitespace()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::Parse { pos: 0, msg: "bad braid letter".into() })?;
        Self::new(letters, strand_count)
    }

    /// Number of cycles of the permutation the word induces; this equals the
    /// component count of the closure.
    pub fn permutation_cycles(&self) -> usize {
        let mut perm: Vec<usize> = (0..self.strand_count).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        let mut seen = vec![false; self.strand_count];
        let mut cycles = 0;
        for s in 0..self.strand_count {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                t = perm[t];
            }
        }
        cycles
    }
}

/// A knot/link input: explicit diagram, braid closure, or a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Presentation {
    Pd(PDCode),
    Braid(BraidWord),
    /// `Pretzel(p, q, r)` is the pretzel knot P(2p+1, 2q+1, 2r+1); the
    /// parameters may be negative (band counts are odd integers).
    Pretzel(i64, i64, i64),
    /// `Twist(m)` is the 2m-twist knot; `Twist(0)` is the unknot.
    Twist(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    Pd,
    Braid,
    Pretzel,
    Twist,
}

/// Parse a presentation of the given kind from its text grammar.
pub fn parse_presentation(text: &str, kind: PresentationKind) -> Result<Presentation, Error> {
    match kind {
        PresentationKind::Pd => Ok(Presentation::Pd(PDCode::parse(text)?)),
        PresentationKind::Braid => Ok(Presentation::Braid(BraidWord::parse(text)?)),
        PresentationKind::Pretzel => {
            let bands: Vec<i64> = text
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::Parse { pos: 0, msg: "bad pretzel band count".into() })?;
            if bands.len() != 3 {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "pretzel needs three band counts".into(),
                });
            }
            for &b in &bands {
                if b % 2 == 0 {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("pretzel band count {b} must be odd"),
                    });
                }
            }
            Ok(Presentation::Pretzel(
                (bands[0] - 1) / 2,
                (bands[1] - 1) / 2,
                (bands[2] - 1) / 2,
            ))
        }
        PresentationKind::Twist => {
            let n: u64 = text.trim().parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: "bad twist parameter".into(),
            })?;
            if n % 2 != 0 {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("twist parameter {n} must be even (the knot T_2m)"),
                });
            }
            Ok(Presentation::Twist(n / 2))
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::Pd(pd) => write!(f, "pd {pd}"),
            Presentation::Braid(b) => {
                write!(f, "braid {}:", b.strand_count)?;
                for l in &b.letters {
                    write!(f, " {l}")?;
                }
                Ok(())
            }
            Presentation::Pretzel(p, q, r) => {
                write!(f, "pretzel {},{},{}", 2 * p + 1, 2 * q + 1, 2 * r + 1)
            }
            Presentation::Twist(m) => write!(f, "twist {}", 2 * m),
        }
    }
}

/// End of a crossing: (crossing index, port 0..3). Port 0 is the incoming
/// under-strand, port 2 the outgoing under-strand.
pub(crate) type End = (usize, u8);

/// Oriented combinatorial diagram with resolved over-strand directions.
/// `succ` maps each out-end to the in-end its arc feeds; `labels` carries an
/// arbitrary distinct arc label per in-end, used for canonical renumbering
/// and deterministic base-point choices.
#[derive(Clone, Debug)]
pub(crate) struct Diagram {
    pub over_in: Vec<u8>, // 1 or 3 per crossing
    pub succ: BTreeMap<End, End>,
    pub labels: BTreeMap<End, u32>,
    pub free_loops: usize,
    next_label: u32,
}

impl Diagram {
    pub fn new() -> Self {
        Self {
            over_in: Vec::new(),
            succ: BTreeMap::new(),
            labels: BTreeMap::new(),
            free_loops: 0,
            next_label: 1,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.over_in.len()
    }

    fn add_crossing(&mut self, over_in: u8) -> usize {
        debug_assert!(over_in == 1 || over_in == 3);
        self.over_in.push(over_in);
        self.over_in.len() - 1
    }

    fn connect(&mut self, out: End, inc: End) {
        self.succ.insert(out, inc);
        self.labels.insert(inc, self.next_label);
        self.next_label += 1;
    }

    pub fn sign(&self, c: usize) -> i8 {
        if self.over_in[c] == 3 {
            1
        } else {
            -1
        }
    }

    pub fn over_out(&self, c: usize) -> u8 {
        4 - self.over_in[c]
    }

    fn is_in_port(&self, (c, p): End) -> bool {
        p == 0 || p == self.over_in[c]
    }

    /// The out-port the strand entering at `p` leaves through.
    fn out_port_for(&self, (c, p): End) -> End {
        if p == 0 {
            (c, 2)
        } else {
            debug_assert_eq!(p, self.over_in[c]);
            (c, self.over_out(c))
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.crossing_count()).map(|c| self.sign(c) as i64).sum()
    }

    /// Component cycles as ordered lists of in-ends, each starting at the
    /// in-end with the component's lowest arc label; components ordered by
    /// that label. Free loops are not included.
    pub fn components(&self) -> Vec<Vec<End>> {
        let mut remaining: std::collections::BTreeSet<End> = self.labels.keys().copied().collect();
        let mut comps = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            // gather the cycle through `start`
            let mut cycle = Vec::new();
            let mut e = start;
            loop {
                cycle.push(e);
                remaining.remove(&e);
                e = self.succ[&self.out_port_for(e)];
                if e == start {
                    break;
                }
            }
            // rotate so the lowest label comes first
            let base = cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, e)| self.labels[e])
                .map(|(i, _)| i)
                .unwrap();
            cycle.rotate_left(base);
            comps.push(cycle);
        }
        comps.sort_by_key(|cycle| self.labels[&cycle[0]]);
        comps
    }

    pub fn component_count(&self) -> usize {
        let from_crossings = self.components().len();
        let total = from_crossings + self.free_loops;
        total.max(1)
    }

    /// Swap over and under at crossing `i`, rotating ports so the new
    /// under-in sits at port 0.
    pub fn switch(&self, i: usize) -> Self {
        let mut out = self.clone();
        // old -> new port map
        let map: [u8; 4] = if self.over_in[i] == 3 {
            // positive: new tuple starts at old port 3
            [1, 2, 3, 0]
        } else {
            // negative: new tuple starts at old port 1
            [3, 0, 1, 2]
        };
        out.over_in[i] = if self.over_in[i] == 3 { 1 } else { 3 };
        let remap = |e: End| -> End {
            if e.0 == i {
                (i, map[e.1 as usize])
            } else {
                e
            }
        };
        out.succ = self
            .succ
            .iter()
            .map(|(&o, &t)| (remap(o), remap(t)))
            .collect();
        out.labels = self
            .labels
            .iter()
            .map(|(&e, &l)| (remap(e), l))
            .collect();
        out
    }

    /// Oriented smoothing at crossing `i`: the incoming under-strand is
    /// rejoined to the outgoing over-strand and vice versa. May split or
    /// merge components; a resolution whose arcs touch no other crossing
    /// becomes a free loop.
    pub fn smooth(&self, i: usize) -> Self {
        let in_u: End = (i, 0);
        let in_o: End = (i, self.over_in[i]);
        let out_u: End = (i, 2);
        let out_o: End = (i, self.over_out(i));
        // internal rerouting after the smoothing
        let route = |e: End| -> End {
            if e == in_u {
                out_o
            } else {
                debug_assert_eq!(e, in_o);
                out_u
            }
        };

        let mut out = Self {
            over_in: Vec::new(),
            succ: BTreeMap::new(),
            labels: BTreeMap::new(),
            free_loops: self.free_loops,
            next_label: self.next_label,
        };
        for (c, &oi) in self.over_in.iter().enumerate() {
            if c != i {
                out.over_in.push(oi);
            }
        }
        let reindex = |e: End| -> End {
            if e.0 > i {
                (e.0 - 1, e.1)
            } else {
                e
            }
        };

        // splice arcs across the removed crossing
        for (&o, &t) in &self.succ {
            if o.0 == i {
                continue;
            }
            let mut t = t;
            while t.0 == i {
                t = self.succ[&route(t)];
            }
            out.succ.insert(reindex(o), reindex(t));
            out.labels.insert(reindex(t), self.labels[&t]);
        }

        // resolutions touching no other crossing close into free loops
        let mut visited = Vec::new();
        for start in [in_u, in_o] {
            if visited.contains(&start) {
                continue;
            }
            let mut t = start;
            let closed = loop {
                visited.push(t);
                let next = self.succ[&route(t)];
                if next == start {
                    break true;
                }
                if next.0 != i {
                    break false;
                }
                t = next;
            };
            if closed {
                out.free_loops += 1;
            }
        }
        out
    }

    /// Canonical PD code: components ordered by lowest surviving arc label,
    /// arcs renumbered 1..2n by traversal; crossing order is preserved.
    pub fn to_pd(&self) -> PDCode {
        let mut new_label: BTreeMap<End, u32> = BTreeMap::new();
        let mut counter = 1u32;
        for cycle in self.components() {
            for e in cycle {
                new_label.insert(e, counter);
                counter += 1;
            }
        }
        let label_at = |e: End| -> u32 {
            if self.is_in_port(e) {
                new_label[&e]
            } else {
                new_label[&self.succ[&e]]
            }
        };
        let crossings = (0..self.crossing_count())
            .map(|c| {
                [
                    label_at((c, 0)),
                    label_at((c, 1)),
                    label_at((c, 2)),
                    label_at((c, 3)),
                ]
            })
            .collect();
        PDCode { crossings, free_loops: self.free_loops }
    }

    /// Resolve a PD code into an oriented diagram, checking every invariant.
    pub fn from_pd(pd: &PDCode) -> Result<Self, Error> {
        let n = pd.crossings.len();
        if n == 0 {
            let mut d = Self::new();
            d.free_loops = pd.free_loops;
            return Ok(d);
        }
        // every label appears exactly twice
        let mut occurrences: BTreeMap<u32, Vec<End>> = BTreeMap::new();
        for (c, x) in pd.crossings.iter().enumerate() {
            for (p, &label) in x.iter().enumerate() {
                occurrences.entry(label).or_default().push((c, p as u8));
            }
        }
        if occurrences.len() != 2 * n {
            return Err(Error::InvalidDiagram(format!(
                "expected {} distinct arc labels, found {}",
                2 * n,
                occurrences.len()
            )));
        }
        for (&label, occ) in &occurrences {
            if occ.len() != 2 {
                return Err(Error::InvalidDiagram(format!(
                    "arc label {label} appears {} times",
                    occ.len()
                )));
            }
        }

        // role resolution: true = incoming. Under ports are fixed; the two
        // occurrences of a label have opposite roles, as do the two over
        // ports of a crossing.
        let mut role: BTreeMap<End, bool> = BTreeMap::new();
        for c in 0..n {
            role.insert((c, 0), true);
            role.insert((c, 2), false);
        }
        let other_occurrence = |e: End| -> End {
            let label = pd.crossings[e.0][e.1 as usize];
            let occ = &occurrences[&label];
            if occ[0] == e {
                occ[1]
            } else {
                occ[0]
            }
        };
        let set_role = |role: &mut BTreeMap<End, bool>, e: End, r: bool| -> Result<bool, Error> {
            match role.get(&e) {
                Some(&prev) if prev != r => Err(Error::InvalidDiagram(format!(
                    "inconsistent orientation at crossing {} port {} (arc {})",
                    e.0, e.1, pd.crossings[e.0][e.1 as usize]
                ))),
                Some(_) => Ok(false),
                None => {
                    role.insert(e, r);
                    Ok(true)
                }
            }
        };
        let propagate = |role: &mut BTreeMap<End, bool>| -> Result<(), Error> {
            loop {
                let mut changed = false;
                let snapshot: Vec<(End, bool)> = role.iter().map(|(&e, &r)| (e, r)).collect();
                for (e, r) in snapshot {
                    changed |= set_role(role, other_occurrence(e), !r)?;
                    if e.1 == 1 || e.1 == 3 {
                        changed |= set_role(role, (e.0, 4 - e.1), !r)?;
                    }
                }
                if !changed {
                    return Ok(());
                }
            }
        };
        propagate(&mut role)?;
        // components passing only over other components stay unresolved;
        // fall back to the consecutive-numbering rule: succession is +1
        // except at the wrap from a component's highest label to its lowest
        for c in 0..n {
            if role.contains_key(&(c, 1)) {
                continue;
            }
            let b = pd.crossings[c][1];
            let d = pd.crossings[c][3];
            let over_in_port = if d == b + 1 {
                1 // over runs b -> d
            } else if b == d + 1 {
                3
            } else if b > d {
                1 // wrap: larger label feeds the smaller
            } else {
                3
            };
            role.insert((c, over_in_port), true);
            role.insert((c, 4 - over_in_port), false);
            propagate(&mut role)?;
        }

        let mut diagram = Self::new();
        for c in 0..n {
            let over_in = if role[&(c, 1)] { 1 } else { 3 };
            diagram.add_crossing(over_in);
        }
        for (&label, occ) in &occurrences {
            let (a, b) = (occ[0], occ[1]);
            let (out_end, in_end) = if role[&a] { (b, a) } else { (a, b) };
            if role[&out_end] {
                return Err(Error::InvalidDiagram(format!(
                    "arc label {label} is incoming at both occurrences"
                )));
            }
            diagram.succ.insert(out_end, in_end);
            diagram.labels.insert(in_end, label);
        }
        diagram.next_label = occurrences.keys().max().unwrap() + 1;
        diagram.free_loops = pd.free_loops;

        // the numbering must follow the orientation: +1 along each
        // component with a single wrap from max to min
        for cycle in diagram.components() {
            let labels: Vec<u32> = cycle.iter().map(|e| diagram.labels[e]).collect();
            let min = *labels.iter().min().unwrap();
            let len = labels.len() as u32;
            for (i, &l) in labels.iter().enumerate() {
                let expected = min + i as u32;
                if l != expected {
                    return Err(Error::InvalidDiagram(format!(
                        "arc labels of a component are not consecutive along \
                         the orientation (expected {expected}, found {l})"
                    )));
                }
                let _ = len;
            }
        }
        Ok(diagram)
    }
}

/// Ends of a twist region: where the descending strand enters/leaves and
/// where the ascending strand enters/leaves.
struct RegionEnds {
    down_in: End,
    up_out: End,
    down_out: End,
    up_in: End,
}

/// Build a vertical twist region of `count` crossings with antiparallel
/// strands. `positive` selects the handedness; positive regions consist of
/// positive crossings.
fn antiparallel_region(d: &mut Diagram, count: usize, positive: bool) -> RegionEnds {
    assert!(count > 0);
    let first = d.crossing_count();
    for k in 0..count {
        let type_a = k % 2 == 0;
        let over_in = if positive { 3 } else { 1 };
        d.add_crossing(over_in);
        let c = first + k;
        if k == 0 {
            continue;
        }
        let prev = c - 1;
        // connect crossing `prev` to `c`; ports depend on the alternating
        // crossing type and the handedness
        if positive {
            if type_a {
                // prev is type B: down exits port 2, up enters port 3
                d.connect((prev, 2), (c, 3));
                d.connect((c, 2), (prev, 3));
            } else {
                // prev is type A: down exits port 1, up enters port 0
                d.connect((prev, 1), (c, 0));
                d.connect((c, 1), (prev, 0));
            }
        } else if type_a {
            // prev is type B': down exits port 3, up enters port 0
            d.connect((prev, 3), (c, 0));
            d.connect((c, 3), (prev, 0));
        } else {
            // prev is type A': down exits port 2, up enters port 1
            d.connect((prev, 2), (c, 1));
            d.connect((c, 2), (prev, 1));
        }
    }
    let last = first + count - 1;
    let last_is_a = (count - 1) % 2 == 0;
    if positive {
        RegionEnds {
            down_in: (first, 3),
            up_out: (first, 2),
            down_out: if last_is_a { (last, 1) } else { (last, 2) },
            up_in: if last_is_a { (last, 0) } else { (last, 3) },
        }
    } else {
        RegionEnds {
            down_in: (first, 0),
            up_out: (first, 3),
            down_out: if last_is_a { (last, 2) } else { (last, 3) },
            up_in: if last_is_a { (last, 1) } else { (last, 0) },
        }
    }
}

/// Stack of `count` braid-style crossings between two parallel descending
/// strands. Returns (in_left, in_right, out_left, out_right).
fn parallel_region(d: &mut Diagram, count: usize, positive: bool) -> (End, End, End, End) {
    assert!(count > 0);
    let first = d.crossing_count();
    let mut left_out: Option<End> = None;
    let mut right_out: Option<End> = None;
    let mut in_left = None;
    let mut in_right = None;
    for k in 0..count {
        let over_in = if positive { 3 } else { 1 };
        d.add_crossing(over_in);
        let c = first + k;
        // positive: left strand enters port 0 (under), right port 3 (over);
        // exits: left port 1, right port 2. negative: mirrored.
        let (inl, inr, outl, outr) = if positive {
            ((c, 0), (c, 3), (c, 1), (c, 2))
        } else {
            ((c, 1), (c, 0), (c, 2), (c, 3))
        };
        match left_out {
            Some(o) => d.connect(o, inl),
            None => in_left = Some(inl),
        }
        match right_out {
            Some(o) => d.connect(o, inr),
            None => in_right = Some(inr),
        }
        left_out = Some(outl);
        right_out = Some(outr);
    }
    (
        in_left.unwrap(),
        in_right.unwrap(),
        left_out.unwrap(),
        right_out.unwrap(),
    )
}

/// Closure of a braid word: positive letters give positive crossings.
fn braid_diagram(w: &BraidWord) -> Diagram {
    let mut d = Diagram::new();
    let mut last_out: Vec<Option<End>> = vec![None; w.strand_count];
    let mut first_in: Vec<Option<End>> = vec![None; w.strand_count];
    for &letter in &w.letters {
        let i = letter.unsigned_abs() as usize - 1;
        let positive = letter > 0;
        let c = d.add_crossing(if positive { 3 } else { 1 });
        let (in_l, in_r, out_l, out_r) = if positive {
            ((c, 0), (c, 3), (c, 1), (c, 2))
        } else {
            ((c, 1), (c, 0), (c, 2), (c, 3))
        };
        for (pos, inc) in [(i, in_l), (i + 1, in_r)] {
            match last_out[pos] {
                Some(o) => d.connect(o, inc),
                None => first_in[pos] = Some(inc),
            }
        }
        last_out[i] = Some(out_l);
        last_out[i + 1] = Some(out_r);
    }
    for s in 0..w.strand_count {
        match (last_out[s], first_in[s]) {
            (Some(o), Some(i)) => d.connect(o, i),
            (None, None) => d.free_loops += 1,
            _ => unreachable!(),
        }
    }
    d
}

/// Pretzel diagram: bands joined in a cycle, each band an antiparallel twist
/// region. Band k occupies crossings `[Σ|c_j| (j<k) .. +|c_k|)` in order,
/// so the topmost crossing of band k is the first index of that range.
fn pretzel_diagram(band_counts: &[i64]) -> Diagram {
    let mut d = Diagram::new();
    let regions: Vec<RegionEnds> = band_counts
        .iter()
        .map(|&c| {
            assert!(c % 2 != 0, "pretzel band counts must be odd");
            antiparallel_region(&mut d, c.unsigned_abs() as usize, c > 0)
        })
        .collect();
    let k = regions.len();
    for i in 0..k {
        let j = (i + 1) % k;
        d.connect(regions[i].down_out, regions[j].up_in);
        d.connect(regions[i].up_out, regions[j].down_in);
    }
    d
}

/// 2m-twist knot: an antiparallel twist region of 2m positive crossings
/// closed through a 2-crossing clasp of parallel strands. The twist region
/// occupies crossings 0..2m, the clasp the final two.
fn twist_diagram(m: u64) -> Diagram {
    let mut d = Diagram::new();
    if m == 0 {
        d.free_loops = 1;
        return d;
    }
    let twist = antiparallel_region(&mut d, 2 * m as usize, true);
    let (clasp_in_l, clasp_in_r, clasp_out_l, clasp_out_r) =
        parallel_region(&mut d, 2, false);
    d.connect(twist.down_out, clasp_in_l);
    d.connect(clasp_out_l, twist.up_in);
    d.connect(twist.up_out, clasp_in_r);
    d.connect(clasp_out_r, twist.down_in);
    d
}

pub(crate) fn to_diagram(p: &Presentation) -> Result<Diagram, Error> {
    match p {
        Presentation::Pd(pd) => Diagram::from_pd(pd),
        Presentation::Braid(w) => Ok(braid_diagram(w)),
        Presentation::Pretzel(a, b, c) => {
            Ok(pretzel_diagram(&[2 * a + 1, 2 * b + 1, 2 * c + 1]))
        }
        Presentation::Twist(m) => Ok(twist_diagram(*m)),
    }
}

/// Realize a presentation as an oriented PD code.
pub fn to_pd(p: &Presentation) -> Result<PDCode, Error> {
    Ok(to_diagram(p)?.to_pd())
}

/// Sign of crossing `index`: +1 iff the over-strand runs `d -> b`.
pub fn crossing_sign(pd: &PDCode, index: usize) -> Result<i8, Error> {
    let d = Diagram::from_pd(pd)?;
    if index >= d.crossing_count() {
        return Err(Error::InvalidDiagram(format!("no crossing {index}")));
    }
    Ok(d.sign(index))
}

/// Swap over and under strands at `index`.
pub fn switch_crossing(pd: &PDCode, index: usize) -> Result<PDCode, Error> {
    let d = Diagram::from_pd(pd)?;
    if index >= d.crossing_count() {
        return Err(Error::InvalidDiagram(format!("no crossing {index}")));
    }
    Ok(d.switch(index).to_pd())
}

/// Oriented resolution of crossing `index`.
pub fn smooth_crossing(pd: &PDCode, index: usize) -> Result<PDCode, Error> {
    let d = Diagram::from_pd(pd)?;
    if index >= d.crossing_count() {
        return Err(Error::InvalidDiagram(format!("no crossing {index}")));
    }
    Ok(d.smooth(index).to_pd())
}

pub fn component_count(pd: &PDCode) -> Result<usize, Error> {
    Ok(Diagram::from_pd(pd)?.component_count())
}

pub fn writhe(pd: &PDCode) -> Result<i64, Error> {
    Ok(Diagram::from_pd(pd)?.writhe())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn trefoil_pd() -> PDCode {
        PDCode::parse("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap()
    }

    #[test]
    fn parse_trefoil_pd() {
        let pd = trefoil_pd();
        assert_eq!(pd.crossing_count(), 3);
        assert_eq!(component_count(&pd).unwrap(), 1);
    }

    #[test]
    fn reject_repeated_label() {
        let err = PDCode::parse("X[1,1,1,2] X[2,3,3,4]").unwrap_err();
        assert!(matches!(err, Error::Parse { .. } | Error::InvalidDiagram(_)));
    }

    #[test]
    fn parse_braid() {
        let w = BraidWord::parse("2: 1 1 1").unwrap();
        assert_eq!(w.letters, vec![1, 1, 1]);
        assert_eq!(w.strand_count, 2);
        assert!(BraidWord::parse("2: 5").is_err());
    }

    #[test]
    fn parse_pretzel_and_twist() {
        assert_eq!(
            parse_presentation("3,3,3", PresentationKind::Pretzel).unwrap(),
            Presentation::Pretzel(1, 1, 1)
        );
        assert_eq!(
            parse_presentation("2", PresentationKind::Twist).unwrap(),
            Presentation::Twist(1)
        );
        assert!(parse_presentation("3", PresentationKind::Twist).is_err());
        assert!(parse_presentation("2,3,3", PresentationKind::Pretzel).is_err());
    }

    #[test]
    fn braid_closure_signs() {
        let pd = to_pd(&Presentation::Braid(BraidWord::new(vec![1, 1, 1], 2).unwrap())).unwrap();
        assert_eq!(pd.crossing_count(), 3);
        for i in 0..3 {
            assert_eq!(crossing_sign(&pd, i).unwrap(), 1);
        }
        assert_eq!(writhe(&pd).unwrap(), 3);
        assert_eq!(component_count(&pd).unwrap(), 1);

        let mirror =
            to_pd(&Presentation::Braid(BraidWord::new(vec![-1, -1, -1], 2).unwrap())).unwrap();
        for i in 0..3 {
            assert_eq!(crossing_sign(&mirror, i).unwrap(), -1);
        }
    }

    #[test]
    fn switch_is_involution_and_negates_sign() {
        let pd = trefoil_pd();
        for i in 0..3 {
            let s = crossing_sign(&pd, i).unwrap();
            let switched = switch_crossing(&pd, i).unwrap();
            assert_eq!(crossing_sign(&switched, i).unwrap(), -s);
            assert_eq!(switch_crossing(&switched, i).unwrap(), pd);
        }
    }

    #[test]
    fn smoothing_changes_component_count_by_one() {
        let pd = trefoil_pd();
        let n = component_count(&pd).unwrap();
        for i in 0..3 {
            let smoothed = smooth_crossing(&pd, i).unwrap();
            let m = component_count(&smoothed).unwrap();
            assert_eq!((n as i64 - m as i64).abs(), 1);
        }
    }

    #[test]
    fn smooth_kink_gives_two_component_unlink() {
        // one-crossing positive kink: closure of a single-crossing diagram
        let kink = to_pd(&Presentation::Braid(BraidWord::new(vec![1], 2).unwrap())).unwrap();
        assert_eq!(kink.crossing_count(), 1);
        assert_eq!(component_count(&kink).unwrap(), 1);
        let smoothed = smooth_crossing(&kink, 0).unwrap();
        assert_eq!(smoothed.crossing_count(), 0);
        assert_eq!(component_count(&smoothed).unwrap(), 2);
    }

    #[test]
    fn empty_code_is_unknot() {
        let pd = PDCode::empty();
        assert_eq!(component_count(&pd).unwrap(), 1);
        assert_eq!(writhe(&pd).unwrap(), 0);
    }

    #[test]
    fn twist_zero_is_unknot() {
        let pd = to_pd(&Presentation::Twist(0)).unwrap();
        assert_eq!(pd.crossing_count(), 0);
        assert_eq!(pd.free_loops, 1);
        assert_eq!(component_count(&pd).unwrap(), 1);
    }

    #[test]
    fn pretzel_crossing_count_and_signs() {
        let pd = to_pd(&Presentation::Pretzel(1, 1, 1)).unwrap();
        assert_eq!(pd.crossing_count(), 9);
        assert_eq!(component_count(&pd).unwrap(), 1);
        for i in 0..9 {
            assert_eq!(crossing_sign(&pd, i).unwrap(), 1);
        }
    }

    #[test]
    fn pretzel_with_negative_band() {
        let pd = to_pd(&Presentation::Pretzel(-1, 0, 1)).unwrap();
        assert_eq!(pd.crossing_count(), 5);
        assert_eq!(component_count(&pd).unwrap(), 1);
        assert_eq!(crossing_sign(&pd, 0).unwrap(), -1);
        assert_eq!(crossing_sign(&pd, 1).unwrap(), 1);
    }

    #[test]
    fn braid_component_count_matches_permutation_cycles() {
        let words = [
            (vec![1, 1, 1], 2),
            (vec![1, 1], 2),
            (vec![1, -2, 1, -2], 3),
            (vec![1], 3),
            (vec![2, 2, 1], 3),
        ];
        for (letters, strands) in words {
            let w = BraidWord::new(letters, strands).unwrap();
            let pd = to_pd(&Presentation::Braid(w.clone())).unwrap();
            assert_eq!(component_count(&pd).unwrap(), w.permutation_cycles());
        }
    }

    #[test]
    fn validation_accepts_generated_codes() {
        let pd = to_pd(&Presentation::Pretzel(1, 2, 0)).unwrap();
        assert!(pd.validate().is_ok());
        let switched = switch_crossing(&pd, 2).unwrap();
        assert!(switched.validate().is_ok());
        let smoothed = smooth_crossing(&pd, 4).unwrap();
        assert!(smoothed.validate().is_ok());
    }

    #[test]
    fn pd_round_trips_through_text() {
        let pd = to_pd(&Presentation::Pretzel(1, 1, 1)).unwrap();
        let parsed = PDCode::parse(&pd.to_string()).unwrap();
        assert_eq!(parsed, pd);
    }
}
