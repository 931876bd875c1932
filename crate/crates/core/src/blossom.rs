//! Maximum-weight matching in general graphs via Edmonds' blossom method
//! (primal-dual formulation, O(n^3)).
//!
//! Port of Joris van Rantwijk's reference implementation to floating-point
//! weights. Vertices are 0..n-1, nontrivial blossoms are n..2n-1, and edge
//! endpoints are numbered 2k / 2k+1 for edge k. Vertex duals are stored
//! doubled (dualvar[v] = 2*u(v)) so the update formulas mirror the integer
//! version exactly.

pub(crate) const NONE: usize = usize::MAX;

/// Result of a max-weight matching run, with the dual solution attached.
pub(crate) struct BlossomOutcome {
    /// mate[v] is the partner of v, or NONE if v is single.
    pub mate: Vec<usize>,
    /// Doubled vertex duals: vertex_duals_x2[v] = 2*u(v).
    pub vertex_duals_x2: Vec<f64>,
    /// Live nontrivial blossoms as (sorted leaf vertices, z dual).
    /// Includes nested blossoms; the family is laminar.
    pub blossoms: Vec<(Vec<usize>, f64)>,
}

pub(crate) struct MaxWeightMatching {
    nvertex: usize,
    nedge: usize,
    eps: f64,
    edges: Vec<(usize, usize, f64)>,
    dualvar: Vec<f64>,
    endpoint: Vec<usize>,
    label: Vec<usize>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossombase: Vec<usize>,
    blossomparent: Vec<usize>,
    bestedge: Vec<usize>,
    unusedblossoms: Vec<usize>,
    mate: Vec<usize>,
    queue: Vec<usize>,
    blossombestedges: Vec<Vec<usize>>,
    blossomchilds: Vec<Vec<usize>>,
    blossomendps: Vec<Vec<usize>>,
    neighbend: Vec<Vec<usize>>,
    allowedge: Vec<bool>,
    maxcardinality: bool,
}

/// Rotate v so that v[split..] comes first.
fn rotate(v: &mut [usize], split: usize) {
    v.rotate_left(split);
}

/// Index with Python-style negative offsets.
fn pos_neg_index(v: &[usize], index: i64) -> usize {
    let actual = if index >= 0 {
        index as usize
    } else {
        v.len() - (-index) as usize
    };
    v[actual]
}

impl MaxWeightMatching {
    pub fn new(nvertex: usize, edges: Vec<(usize, usize, f64)>, maxcardinality: bool) -> Self {
        let nedge = edges.len();
        let maxweight = edges.iter().fold(0.0_f64, |m, &(_, _, w)| m.max(w));
        // Tolerance for recognizing tight edges. Termination does not depend
        // on it: delta steps mark their edge allowable explicitly.
        let eps = 1e-12 * (1.0 + maxweight.abs());

        let endpoint: Vec<usize> = (0..2 * nedge)
            .map(|x| if x % 2 == 0 { edges[x / 2].0 } else { edges[x / 2].1 })
            .collect();

        let mut neighbend = vec![vec![]; nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            debug_assert!(i != j && i < nvertex && j < nvertex);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }

        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(vec![0.0; nvertex]);

        let mut blossombase: Vec<usize> = (0..nvertex).collect();
        blossombase.extend(vec![NONE; nvertex]);

        MaxWeightMatching {
            nvertex,
            nedge,
            eps,
            edges,
            dualvar,
            endpoint,
            label: vec![0; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossombase,
            blossomparent: vec![NONE; 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            mate: vec![NONE; nvertex],
            queue: vec![],
            blossombestedges: vec![vec![]; 2 * nvertex],
            blossomchilds: vec![vec![]; 2 * nvertex],
            blossomendps: vec![vec![]; 2 * nvertex],
            neighbend,
            allowedge: vec![false; nedge],
            maxcardinality,
        }
    }

    /// 2 * slack of edge k (invalid for edges internal to a blossom).
    #[inline]
    fn slack(&self, k: usize) -> f64 {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2.0 * wt
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut leaves = vec![];
        if b < self.nvertex {
            leaves.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                if t < self.nvertex {
                    leaves.push(t);
                } else {
                    leaves.extend(self.blossom_leaves(t));
                }
            }
        }
        leaves
    }

    /// Label the top-level blossom of w with t, reached via remote endpoint p.
    fn assign_label(&mut self, w: usize, t: usize, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);

        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;

        if t == 1 {
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else if t == 2 {
            // The base is the only vertex of a T-blossom with an external mate.
            let base = self.blossombase[b];
            debug_assert!(self.mate[base] != NONE);
            let mbase = self.mate[base];
            let endpoint = self.endpoint[mbase];
            self.assign_label(endpoint, 1, mbase ^ 1);
        }
    }

    /// Trace back from v and w; return the base of a new blossom, or NONE if
    /// the paths end in distinct single vertices (an augmenting path exists).
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = vec![];
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if (self.label[b] & 4) != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert!(self.label[b] == 1);
            path.push(b);
            self.label[b] = 5;
            debug_assert!(self.labelend[b] == self.mate[self.blossombase[b]]);
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert!(self.label[b] == 2);
                debug_assert!(self.labelend[b] != NONE);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    /// Form a new S-blossom with the given base around edge k.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];

        let b = self.unusedblossoms.pop().unwrap();
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;

        self.blossomchilds[b] = vec![];
        self.blossomendps[b] = vec![];

        while bv != bb {
            self.blossomparent[bv] = b;
            self.blossomchilds[b].push(bv);
            self.blossomendps[b].push(self.labelend[bv]);
            debug_assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            debug_assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }

        self.blossomchilds[b].push(bb);
        self.blossomchilds[b].reverse();
        self.blossomendps[b].reverse();
        self.blossomendps[b].push(2 * k);

        while bw != bb {
            self.blossomparent[bw] = b;
            self.blossomchilds[b].push(bw);
            self.blossomendps[b].push(self.labelend[bw] ^ 1);
            debug_assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            debug_assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }

        debug_assert!(self.label[bb] == 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0.0;

        for v in self.blossom_leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                // Former T-vertex becomes an S-vertex inside the new blossom.
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }

        // Compute blossombestedges[b] from the children's least-slack lists.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for &bv in &self.blossomchilds[b].clone() {
            let mut nblists: Vec<Vec<usize>> = vec![];
            if self.blossombestedges[bv].is_empty() {
                for v in self.blossom_leaves(bv) {
                    nblists.push(self.neighbend[v].iter().map(|p| p / 2).collect());
                }
            } else {
                nblists.push(self.blossombestedges[bv].clone());
            }
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    let bestto = bestedgeto[bj];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestto == NONE || self.slack(k) < self.slack(bestto))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = vec![];
            self.bestedge[bv] = NONE;
        }
        self.blossombestedges[b] = bestedgeto.into_iter().filter(|&k| k != NONE).collect();

        self.bestedge[b] = NONE;
        for &k in &self.blossombestedges[b] {
            let be = self.bestedge[b];
            if be == NONE || self.slack(k) < self.slack(be) {
                self.bestedge[b] = k;
            }
        }
    }

    /// Expand the given top-level blossom.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for s in self.blossomchilds[b].clone() {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s].abs() <= self.eps {
                self.expand_blossom(s, endstage);
            } else {
                for &v in &self.blossom_leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }

        // A T-blossom expanded mid-stage needs its sub-blossoms relabeled
        // along the path from the entry child to the base.
        if !endstage && self.label[b] == 2 {
            debug_assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];

            let mut j: i64 = self.blossomchilds[b]
                .iter()
                .position(|&r| r == entrychild)
                .unwrap() as i64;
            let jstep: i64;
            let endptrick: usize;
            if (j & 1) != 0 {
                j -= self.blossomchilds[b].len() as i64;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }

            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                self.label[self.endpoint
                    [pos_neg_index(&self.blossomendps[b], j - endptrick as i64) ^ endptrick ^ 1]] =
                    0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);

                self.allowedge[pos_neg_index(&self.blossomendps[b], j - endptrick as i64) / 2] =
                    true;
                j += jstep;
                p = pos_neg_index(&self.blossomendps[b], j - endptrick as i64) ^ endptrick;

                self.allowedge[p / 2] = true;
                j += jstep;
            }

            // Relabel the base sub-blossom directly, without stepping to its mate.
            let bv = pos_neg_index(&self.blossomchilds[b], j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;

            j += jstep;
            while pos_neg_index(&self.blossomchilds[b], j) != entrychild {
                let bv = pos_neg_index(&self.blossomchilds[b], j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut v: usize = NONE;
                for &temp in &self.blossom_leaves(bv) {
                    v = temp;
                    if self.label[v] != 0 {
                        break;
                    }
                }
                if self.label[v] != 0 {
                    debug_assert!(self.label[v] == 2);
                    debug_assert!(self.inblossom[v] == bv);
                    self.label[v] = 0;
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0;
                    let lblend = self.labelend[v];
                    self.assign_label(v, 2, lblend);
                }
                j += jstep;
            }
        }

        self.label[b] = NONE;
        self.labelend[b] = NONE;
        self.blossombase[b] = NONE;
        self.bestedge[b] = NONE;
        self.blossomchilds[b] = vec![];
        self.blossomendps[b] = vec![];
        self.blossombestedges[b] = vec![];
        self.unusedblossoms.push(b);
    }

    /// Swap matched/unmatched edges along the path inside blossom b from
    /// vertex v to the base, then rotate the child list so v becomes the base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }

        if t != NONE && t >= self.nvertex {
            self.augment_blossom(t, v);
        }

        let i = self.blossomchilds[b].iter().position(|&r| r == t).unwrap();
        let mut j: i64 = i as i64;
        let jstep: i64;
        let endptrick: usize;
        if (i & 1) != 0 {
            j -= self.blossomchilds[b].len() as i64;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }

        while j != 0 {
            j += jstep;
            let mut t = pos_neg_index(&self.blossomchilds[b], j);
            let p = pos_neg_index(&self.blossomendps[b], j - endptrick as i64) ^ endptrick;
            if t != NONE && t >= self.nvertex {
                let endp = self.endpoint[p];
                self.augment_blossom(t, endp);
            }

            j += jstep;
            t = pos_neg_index(&self.blossomchilds[b], j);
            if t != NONE && t >= self.nvertex {
                let endp = self.endpoint[p ^ 1];
                self.augment_blossom(t, endp);
            }

            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }

        rotate(&mut self.blossomchilds[b], i);
        rotate(&mut self.blossomendps[b], i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert!(self.blossombase[b] == v);
    }

    /// Augment the matching along the path through tight edge k between two
    /// S-vertices whose alternating trees are rooted at single vertices.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for &(start, remote) in [(v, 2 * k + 1), (w, 2 * k)].iter() {
            let mut s = start;
            let mut p = remote;
            loop {
                let bs = self.inblossom[s];
                debug_assert!(self.label[bs] == 1);
                debug_assert!(self.labelend[bs] == self.mate[self.blossombase[bs]]);

                if bs != NONE && bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;

                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert!(self.label[bt] == 2);
                debug_assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];

                debug_assert!(self.blossombase[bt] == t);
                if bt != NONE && bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    pub fn solve(mut self) -> BlossomOutcome {
        if self.nedge == 0 {
            return BlossomOutcome {
                mate: vec![NONE; self.nvertex],
                vertex_duals_x2: vec![0.0; self.nvertex],
                blossoms: vec![],
            };
        }

        let mut kslack: f64 = 0.0;
        for _stage in 0..self.nvertex {
            // Each stage tries to find one augmenting path.
            self.label = vec![0; 2 * self.nvertex];
            self.bestedge = vec![NONE; 2 * self.nvertex];
            for b in self.nvertex..2 * self.nvertex {
                self.blossombestedges[b] = vec![];
            }
            self.allowedge = vec![false; self.nedge];
            self.queue = vec![];

            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }

            let mut augmented = false;
            loop {
                // Substage: grow alternating trees until an augmenting path is
                // found or the duals must be adjusted.
                while !self.queue.is_empty() && !augmented {
                    let v = self.queue.pop().unwrap();
                    debug_assert!(self.label[self.inblossom[v]] == 1);
                    for p in self.neighbend[v].clone() {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= self.eps {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                // Vertex inside a T-blossom reached from outside;
                                // remember for relabeling on expansion.
                                debug_assert!(self.label[self.inblossom[w]] == 2);
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE
                                || kslack < self.slack(self.bestedge[b])
                            {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w])) {
                                self.bestedge[w] = k;
                            }
                    }
                }

                if augmented {
                    break;
                }

                // Dual adjustment. delta1: vertex dual floor (non-maxcard only);
                // delta2: S-to-free edge; delta3: S-to-S edge (half slack);
                // delta4: T-blossom dual.
                let mut deltatype = -1;
                let mut delta = 0.0_f64;
                let mut deltaedge = 0usize;
                let mut deltablossom = 0usize;

                if !self.maxcardinality {
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex]
                        .iter()
                        .cloned()
                        .fold(f64::INFINITY, f64::min);
                }

                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }

                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == 1
                        && self.bestedge[b] != NONE
                    {
                        let d = self.slack(self.bestedge[b]) / 2.0;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }

                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }

                if deltatype == -1 {
                    // Max-cardinality optimum reached; final adjustment keeps
                    // all vertex duals nonnegative so the certificate verifies.
                    debug_assert!(self.maxcardinality);
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex]
                        .iter()
                        .cloned()
                        .fold(f64::INFINITY, f64::min)
                        .max(0.0);
                }

                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        0 => {}
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => unreachable!("unexpected label"),
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            0 => {}
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => unreachable!("unexpected label"),
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        let (mut i, j, _) = self.edges[deltaedge];
                        self.allowedge[deltaedge] = true;
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        debug_assert!(self.label[self.inblossom[i]] == 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        debug_assert!(self.label[self.inblossom[i]] == 1);
                        self.queue.push(i);
                    }
                    4 => {
                        self.expand_blossom(deltablossom, false);
                    }
                    _ => unreachable!("unexpected delta type"),
                }
            }

            if !augmented {
                break;
            }

            // End of stage: expand S-blossoms whose dual dropped to zero.
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b].abs() <= self.eps
                {
                    self.expand_blossom(b, true);
                }
            }
        }

        // Remote endpoints -> partner vertices.
        for v in 0..self.nvertex {
            if self.mate[v] != NONE {
                self.mate[v] = self.endpoint[self.mate[v]];
            }
        }
        for v in 0..self.nvertex {
            debug_assert!(self.mate[v] == NONE || self.mate[self.mate[v]] == v);
        }

        let mut blossoms = vec![];
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] != NONE {
                let mut leaves = self.blossom_leaves(b);
                leaves.sort_unstable();
                blossoms.push((leaves, self.dualvar[b]));
            }
        }

        BlossomOutcome {
            mate: self.mate.clone(),
            vertex_duals_x2: self.dualvar[..self.nvertex].to_vec(),
            blossoms,
        }
    }
}

/// Maximum-weight matching; mate[v] = NONE marks single vertices.
pub(crate) fn max_weight_matching(
    nvertex: usize,
    edges: Vec<(usize, usize, f64)>,
    maxcardinality: bool,
) -> BlossomOutcome {
    MaxWeightMatching::new(nvertex, edges, maxcardinality).solve()
}
