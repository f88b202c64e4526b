//! Primal-dual blossom search for maximum weight matchings on general
//! graphs, following Galil's formulation with the O(n^3) least-slack edge
//! bookkeeping.
//!
//! Vertices are numbered `0..nvertex`; non-trivial blossoms occupy
//! `nvertex..2*nvertex`. Edge endpoints are numbered `0..2*nedge` so that
//! endpoints `2k` and `2k+1` belong to edge `k`. Vertex dual variables
//! store `2u(v)` so slacks stay expressible without halving.

/// Marker for "no vertex / no endpoint / no edge" in the index arrays.
pub(crate) const NONE: usize = usize::MAX;

/// Computes a maximum weight matching on `n` vertices.
///
/// With `max_cardinality` the matching has maximum cardinality first and
/// maximum weight among those. Returns `mate` where `mate[v]` is the
/// partner vertex of `v` or [`NONE`] when `v` is unmatched.
pub(crate) fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, f64)],
    max_cardinality: bool,
) -> Vec<usize> {
    if edges.is_empty() {
        return vec![NONE; n];
    }
    let mut solver = Solver::new(n, edges, max_cardinality);
    solver.solve();
    #[cfg(debug_assertions)]
    solver.verify_optimum(1e-8 * solver.maxweight.abs().max(1.0));
    // Translate mate entries from endpoint numbers to vertex numbers.
    let mut mate = solver.mate;
    for slot in mate.iter_mut() {
        if *slot != NONE {
            *slot = solver.endpoint[*slot];
        }
    }
    for v in 0..n {
        debug_assert!(mate[v] == NONE || mate[mate[v]] == v);
    }
    mate
}

struct Solver<'a> {
    edges: &'a [(usize, usize, f64)],
    nedge: usize,
    nvertex: usize,
    max_cardinality: bool,
    maxweight: f64,
    /// endpoint[p] is the vertex to which endpoint p is attached.
    endpoint: Vec<usize>,
    /// neighbend[v] lists the remote endpoints of edges incident to v.
    neighbend: Vec<Vec<usize>>,
    /// mate[v] is the remote endpoint of v's matched edge, or NONE.
    mate: Vec<usize>,
    /// label[b] of a top-level blossom: 0 free, 1 S, 2 T; bit 2 marks
    /// trace-back breadcrumbs.
    label: Vec<usize>,
    /// labelend[b] is the remote endpoint through which b got its label.
    labelend: Vec<usize>,
    /// inblossom[v] is the top-level blossom containing vertex v.
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    /// Ordered sub-blossoms, starting with the base and going round.
    blossomchilds: Vec<Vec<usize>>,
    /// blossombase[b] is the base vertex of blossom b.
    blossombase: Vec<usize>,
    /// blossomendps[b][i] is the local endpoint of child i on the edge to
    /// child i+1 (wrapping).
    blossomendps: Vec<Vec<usize>>,
    /// Least-slack edge per free vertex or top-level S-blossom.
    bestedge: Vec<usize>,
    /// Least-slack edges from a non-trivial S-blossom to each neighbour
    /// S-blossom.
    blossombestedges: Vec<Vec<usize>>,
    unusedblossoms: Vec<usize>,
    /// dualvar[v] = 2u(v) for vertices, z(b) for blossoms.
    dualvar: Vec<f64>,
    /// allowedge[k] means edge k has (numerically) zero slack.
    allowedge: Vec<bool>,
    /// Newly discovered S-vertices awaiting a scan.
    queue: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(n: usize, edges: &'a [(usize, usize, f64)], max_cardinality: bool) -> Self {
        let nedge = edges.len();
        for &(i, j, _) in edges {
            assert!(i != j && i < n && j < n, "edge ({}, {}) invalid for {} vertices", i, j, n);
        }
        let maxweight = edges.iter().map(|e| e.2).fold(0.0f64, f64::max);
        let endpoint = (0..2 * nedge)
            .map(|p| if p % 2 == 0 { edges[p / 2].0 } else { edges[p / 2].1 })
            .collect();
        let mut neighbend = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut blossombase: Vec<usize> = (0..n).collect();
        blossombase.extend(vec![NONE; n]);
        let mut dualvar = vec![maxweight; n];
        dualvar.extend(vec![0.0; n]);
        Solver {
            edges,
            nedge,
            nvertex: n,
            max_cardinality,
            maxweight,
            endpoint,
            neighbend,
            mate: vec![NONE; n],
            label: vec![0; 2 * n],
            labelend: vec![NONE; 2 * n],
            inblossom: (0..n).collect(),
            blossomparent: vec![NONE; 2 * n],
            blossomchilds: vec![Vec::new(); 2 * n],
            blossombase,
            blossomendps: vec![Vec::new(); 2 * n],
            bestedge: vec![NONE; 2 * n],
            blossombestedges: vec![Vec::new(); 2 * n],
            unusedblossoms: (n..2 * n).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    /// 2 * slack of edge k; not meaningful for edges inside blossoms.
    #[inline]
    fn slack(&self, k: usize) -> f64 {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2.0 * wt
    }

    /// Leaf vertices of blossom b.
    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut leaves = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.nvertex {
                leaves.push(t);
            } else {
                stack.extend(self.blossomchilds[t].iter().rev().copied());
            }
        }
        leaves
    }

    /// Labels the top-level blossom containing w, reached through the edge
    /// with remote endpoint p.
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
            // New S-blossom: scan all its vertices.
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else if t == 2 {
            // New T-blossom: its base's mate becomes an S-vertex. Only the
            // base has an external mate.
            let base = self.blossombase[b];
            debug_assert!(self.mate[base] != NONE);
            let mbase = self.mate[base];
            let ep = self.endpoint[mbase];
            self.assign_label(ep, 1, mbase ^ 1);
        }
    }

    /// Traces back from S-vertices v and w. Returns the base of a newly
    /// discovered blossom, or NONE when an augmenting path was found.
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            // Look for a breadcrumb in v's blossom, or lay a new one.
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert!(self.label[b] == 1);
            path.push(b);
            self.label[b] = 5;
            debug_assert!(self.labelend[b] == self.mate[self.blossombase[b]]);
            if self.labelend[b] == NONE {
                // The base of blossom b is single; stop tracing this path.
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert!(self.label[b] == 2 && self.labelend[b] != NONE);
                // b is a T-blossom; trace one more step back.
                v = self.endpoint[self.labelend[b]];
            }
            // Alternate between the two paths.
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    /// Contracts the odd cycle through edge k (joining two S-blossoms) into
    /// a new S-blossom with the given base.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];

        let b = self.unusedblossoms.pop().expect("a blossom id is always free");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;

        let mut childs = Vec::new();
        let mut endps = Vec::new();

        // Trace back from v to base.
        while bv != bb {
            self.blossomparent[bv] = b;
            childs.push(bv);
            endps.push(self.labelend[bv]);
            debug_assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            debug_assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        childs.push(bb);
        childs.reverse();
        endps.reverse();
        endps.push(2 * k);

        // Trace back from w to base.
        while bw != bb {
            self.blossomparent[bw] = b;
            childs.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            debug_assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            debug_assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        self.blossomchilds[b] = childs;
        self.blossomendps[b] = endps;

        debug_assert!(self.label[bb] == 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0.0;

        // Former T-vertices become S-vertices of the new blossom.
        for v in self.blossom_leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }

        // Merge least-slack edge lists of the children.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for child_idx in 0..self.blossomchilds[b].len() {
            let bv = self.blossomchilds[b][child_idx];
            let nblists: Vec<Vec<usize>> = if self.blossombestedges[bv].is_empty() {
                self.blossom_leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|p| p / 2).collect())
                    .collect()
            } else {
                vec![self.blossombestedges[bv].clone()]
            };
            for nblist in nblists {
                for k in nblist {
                    let (i, j, _) = self.edges[k];
                    let outside = if self.inblossom[j] == b { i } else { j };
                    let bj = self.inblossom[outside];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = Vec::new();
            self.bestedge[bv] = NONE;
        }
        self.blossombestedges[b] = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for idx in 0..self.blossombestedges[b].len() {
            let k = self.blossombestedges[b][idx];
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
    }

    /// Expands a top-level blossom, promoting its children to top level.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for s in self.blossomchilds[b].clone() {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0.0 {
                // A zero-dual sub-blossom carries no constraint; open it too.
                self.expand_blossom(s, endstage);
            } else {
                for v in self.blossom_leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }

        // Expanding a T-blossom mid-stage exposes an alternating path
        // through it; relabel along the path from the entry child to the
        // base, then give remaining reachable children label T.
        if !endstage && self.label[b] == 2 {
            debug_assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let mut j = self.blossomchilds[b]
                .iter()
                .position(|&c| c == entrychild)
                .expect("entry child is among the children") as i64;
            let jstep: i64;
            let endptrick: usize;
            if j & 1 != 0 {
                // Odd index: go forward and wrap around.
                j -= self.blossomchilds[b].len() as i64;
                jstep = 1;
                endptrick = 0;
            } else {
                // Even index: go backward.
                jstep = -1;
                endptrick = 1;
            }
            let mut p = self.labelend[b];
            while j != 0 {
                // Relabel the T-sub-blossom.
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = wrap_index(&self.blossomendps[b], j - endptrick as i64) ^ endptrick ^ 1;
                self.label[self.endpoint[q]] = 0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);
                // Step to the next S-sub-blossom and note its forward endpoint.
                self.allowedge[wrap_index(&self.blossomendps[b], j - endptrick as i64) / 2] = true;
                j += jstep;
                p = wrap_index(&self.blossomendps[b], j - endptrick as i64) ^ endptrick;
                // Step to the next T-sub-blossom.
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            // Relabel the base T-sub-blossom without stepping to its mate.
            let bv = wrap_index(&self.blossomchilds[b], j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            // Continue along the blossom until we get back to entrychild,
            // relabeling children reachable from outside.
            j += jstep;
            while wrap_index(&self.blossomchilds[b], j) != entrychild {
                let bv = wrap_index(&self.blossomchilds[b], j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut v = NONE;
                for leaf in self.blossom_leaves(bv) {
                    v = leaf;
                    if self.label[v] != 0 {
                        break;
                    }
                }
                if v != NONE && self.label[v] != 0 {
                    debug_assert!(self.label[v] == 2 && self.inblossom[v] == bv);
                    self.label[v] = 0;
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0;
                    let lblend = self.labelend[v];
                    self.assign_label(v, 2, lblend);
                }
                j += jstep;
            }
        }

        // Recycle the blossom number.
        self.label[b] = NONE;
        self.labelend[b] = NONE;
        self.blossombase[b] = NONE;
        self.bestedge[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.blossombestedges[b] = Vec::new();
        self.unusedblossoms.push(b);
    }

    /// Swaps matched and unmatched edges along the path inside blossom b
    /// from vertex v to the base, then rotates the blossom to make v the
    /// new base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        // Bubble up to an immediate child of b.
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t != NONE && t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b]
            .iter()
            .position(|&c| c == t)
            .expect("t is a child of b");
        let mut j = i as i64;
        let jstep: i64;
        let endptrick: usize;
        if i & 1 != 0 {
            j -= self.blossomchilds[b].len() as i64;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while j != 0 {
            // Step to the next sub-blossom and augment it recursively.
            j += jstep;
            let t = wrap_index(&self.blossomchilds[b], j);
            let p = wrap_index(&self.blossomendps[b], j - endptrick as i64) ^ endptrick;
            if t != NONE && t >= self.nvertex {
                let ep = self.endpoint[p];
                self.augment_blossom(t, ep);
            }
            // Step to the next sub-blossom and augment it recursively.
            j += jstep;
            let t = wrap_index(&self.blossomchilds[b], j);
            if t != NONE && t >= self.nvertex {
                let ep = self.endpoint[p ^ 1];
                self.augment_blossom(t, ep);
            }
            // Match the edge connecting those sub-blossoms.
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        // Rotate the child list so the new base sits at the front.
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert!(self.blossombase[b] == v);
    }

    /// Swaps matched and unmatched edges along the augmenting path through
    /// edge k, which connects a pair of S-vertices.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for &(start, startp) in &[(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = start;
            let mut p = startp;
            // Match vertex s to remote endpoint p, then trace back until a
            // single vertex is reached, swapping matched and unmatched edges.
            loop {
                let bs = self.inblossom[s];
                debug_assert!(self.label[bs] == 1);
                debug_assert!(self.labelend[bs] == self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    // Reached a single vertex; stop.
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert!(self.label[bt] == 2);
                debug_assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                debug_assert!(self.blossombase[bt] == t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        // Each stage matches one more pair (or proves no augmenting path
        // exists); at most nvertex stages.
        for _ in 0..self.nvertex {
            self.label = vec![0; 2 * self.nvertex];
            self.bestedge = vec![NONE; 2 * self.nvertex];
            for list in self.blossombestedges[self.nvertex..].iter_mut() {
                *list = Vec::new();
            }
            self.allowedge = vec![false; self.nedge];
            self.queue.clear();

            // All single, unlabeled vertices start as S-vertices.
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }

            let mut augmented = false;
            loop {
                // Scan S-vertices until the queue drains or we augment.
                while let Some(v) = self.queue.pop() {
                    debug_assert!(self.label[self.inblossom[v]] == 1);
                    for p in self.neighbend[v].clone() {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            // Internal blossom edge; ignore.
                            continue;
                        }
                        let mut kslack = 0.0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0.0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                // Free blossom: w becomes a T-vertex.
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                // S-blossom: either a new blossom or an
                                // augmenting path.
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                // w is inside a T-blossom but not yet
                                // reached from outside.
                                debug_assert!(self.label[self.inblossom[w]] == 2);
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            // Track least-slack edge between S-blossoms.
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == 0 {
                            // w is free; track its least-slack edge to S.
                            if self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]) {
                                self.bestedge[w] = k;
                            }
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path under the current duals; compute the
                // largest safe dual change.
                let mut deltatype = -1;
                let mut delta = 0.0;
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;

                if !self.max_cardinality {
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex]
                        .iter()
                        .copied()
                        .fold(f64::INFINITY, f64::min)
                        .max(0.0);
                }

                // delta2: least slack between an S-vertex and a free vertex.
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

                // delta3: half the least slack between two S-blossoms.
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

                // delta4: smallest dual of a top-level T-blossom.
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
                    // Max-cardinality optimum reached; one final dual update
                    // makes the solution verifiable.
                    debug_assert!(self.max_cardinality);
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex]
                        .iter()
                        .copied()
                        .fold(f64::INFINITY, f64::min)
                        .max(0.0);
                }

                // Update duals.
                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        0 => {}
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        other => unreachable!("vertex label {}", other),
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            0 => {}
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            other => unreachable!("blossom label {}", other),
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        // The least-slack S-to-free edge becomes usable.
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        debug_assert!(self.label[self.inblossom[i]] == 1);
                        self.queue.push(i);
                    }
                    3 => {
                        // The least-slack S-to-S edge becomes usable.
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        debug_assert!(self.label[self.inblossom[i]] == 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    other => unreachable!("delta type {}", other),
                }
            }

            if !augmented {
                break;
            }

            // End of stage: expand S-blossoms whose dual reached zero.
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b] == 0.0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    /// Checks the complementary slackness conditions within `eps`.
    #[cfg(any(test, debug_assertions))]
    fn verify_optimum(&self, eps: f64) {
        let vdualoffset = if self.max_cardinality {
            (-self.dualvar[..self.nvertex]
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min))
            .max(0.0)
        } else {
            0.0
        };
        for k in 0..self.nedge {
            let (i, j, wt) = self.edges[k];
            let mut s = self.dualvar[i] + self.dualvar[j] - 2.0 * wt;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()]);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()]);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (&bi, &bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += 2.0 * self.dualvar[bi];
            }
            assert!(s >= -eps, "edge {} has negative slack {}", k, s);
            if self.mate[i] / 2 == k || self.mate[j] / 2 == k {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k);
                assert!(s.abs() <= eps, "matched edge {} has slack {}", k, s);
            }
        }
        for v in 0..self.nvertex {
            assert!(
                self.mate[v] != NONE || (self.dualvar[v] + vdualoffset).abs() <= eps,
                "single vertex {} has nonzero dual {}",
                v,
                self.dualvar[v]
            );
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] != NONE && self.dualvar[b] > eps {
                assert!(self.blossomendps[b].len() % 2 == 1);
                for (ix, &p) in self.blossomendps[b].iter().enumerate() {
                    if ix % 2 == 1 {
                        assert!(self.mate[self.endpoint[p]] == p ^ 1);
                        assert!(self.mate[self.endpoint[p ^ 1]] == p);
                    }
                }
            }
        }
    }
}

/// Python-style indexing: negative indices count from the back.
#[inline]
fn wrap_index(v: &[usize], index: i64) -> usize {
    if index >= 0 {
        v[index as usize]
    } else {
        v[v.len() - (-index) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(edges: &[(usize, usize, f64)]) -> Vec<usize> {
        let n = edges.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
        max_weight_matching(n, edges, false)
    }

    fn solve_maxcard(edges: &[(usize, usize, f64)]) -> Vec<usize> {
        let n = edges.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
        max_weight_matching(n, edges, true)
    }

    const X: usize = NONE;

    #[test]
    fn no_edges() {
        assert_eq!(max_weight_matching(0, &[], false), Vec::<usize>::new());
        assert_eq!(max_weight_matching(3, &[], false), vec![X, X, X]);
    }

    #[test]
    fn single_edge() {
        assert_eq!(solve(&[(0, 1, 1.0)]), vec![1, 0]);
    }

    #[test]
    fn two_edges_picks_heavier() {
        assert_eq!(solve(&[(1, 2, 10.0), (2, 3, 11.0)]), vec![X, X, 3, 2]);
    }

    #[test]
    fn middle_edge_outweighs_pair() {
        assert_eq!(
            solve(&[(1, 2, 5.0), (2, 3, 11.0), (3, 4, 5.0)]),
            vec![X, X, 3, 2, X]
        );
    }

    #[test]
    fn max_cardinality_overrides_weight() {
        assert_eq!(
            solve_maxcard(&[(1, 2, 5.0), (2, 3, 11.0), (3, 4, 5.0)]),
            vec![X, 2, 1, 4, 3]
        );
    }

    #[test]
    fn negative_weights() {
        let edges = [
            (1, 2, 2.0),
            (1, 3, -2.0),
            (2, 3, 1.0),
            (2, 4, -1.0),
            (3, 4, -6.0),
        ];
        assert_eq!(solve(&edges), vec![X, 2, 1, X, X]);
        assert_eq!(solve_maxcard(&edges), vec![X, 3, 4, 1, 2]);
    }

    #[test]
    fn s_blossom_augmentation() {
        assert_eq!(
            solve(&[(1, 2, 8.0), (1, 3, 9.0), (2, 3, 10.0), (3, 4, 7.0)]),
            vec![X, 2, 1, 4, 3]
        );
        assert_eq!(
            solve(&[
                (1, 2, 8.0),
                (1, 3, 9.0),
                (2, 3, 10.0),
                (3, 4, 7.0),
                (1, 6, 5.0),
                (4, 5, 6.0)
            ]),
            vec![X, 6, 3, 2, 5, 4, 1]
        );
    }

    #[test]
    fn s_to_t_relabel_augmentation() {
        assert_eq!(
            solve(&[
                (1, 2, 9.0),
                (1, 3, 8.0),
                (2, 3, 10.0),
                (1, 4, 5.0),
                (4, 5, 4.0),
                (1, 6, 3.0)
            ]),
            vec![X, 6, 3, 2, 5, 4, 1]
        );
        assert_eq!(
            solve(&[
                (1, 2, 9.0),
                (1, 3, 8.0),
                (2, 3, 10.0),
                (1, 4, 5.0),
                (4, 5, 3.0),
                (1, 6, 4.0)
            ]),
            vec![X, 6, 3, 2, 5, 4, 1]
        );
        assert_eq!(
            solve(&[
                (1, 2, 9.0),
                (1, 3, 8.0),
                (2, 3, 10.0),
                (1, 4, 5.0),
                (4, 5, 3.0),
                (3, 6, 4.0)
            ]),
            vec![X, 2, 1, 6, 5, 4, 3]
        );
    }

    #[test]
    fn nested_s_blossom_augmentation() {
        assert_eq!(
            solve(&[
                (1, 2, 9.0),
                (1, 3, 9.0),
                (2, 3, 10.0),
                (2, 4, 8.0),
                (3, 5, 8.0),
                (4, 5, 10.0),
                (5, 6, 6.0)
            ]),
            vec![X, 3, 4, 1, 2, 6, 5]
        );
    }

    #[test]
    fn s_relabeled_into_nested_s_blossom() {
        assert_eq!(
            solve(&[
                (1, 2, 10.0),
                (1, 7, 10.0),
                (2, 3, 12.0),
                (3, 4, 20.0),
                (3, 5, 20.0),
                (4, 5, 25.0),
                (5, 6, 10.0),
                (6, 7, 10.0),
                (7, 8, 8.0)
            ]),
            vec![X, 2, 1, 4, 3, 6, 5, 8, 7]
        );
    }

    #[test]
    fn nested_s_blossom_expands_recursively() {
        assert_eq!(
            solve(&[
                (1, 2, 8.0),
                (1, 3, 8.0),
                (2, 3, 10.0),
                (2, 4, 12.0),
                (3, 5, 12.0),
                (4, 5, 14.0),
                (4, 6, 12.0),
                (5, 7, 12.0),
                (6, 7, 14.0),
                (7, 8, 12.0)
            ]),
            vec![X, 2, 1, 5, 6, 3, 4, 8, 7]
        );
    }

    #[test]
    fn s_blossom_relabeled_t_then_expanded() {
        assert_eq!(
            solve(&[
                (1, 2, 23.0),
                (1, 5, 22.0),
                (1, 6, 15.0),
                (2, 3, 25.0),
                (3, 4, 22.0),
                (4, 5, 25.0),
                (4, 8, 14.0),
                (5, 7, 13.0)
            ]),
            vec![X, 6, 3, 2, 8, 7, 1, 5, 4]
        );
    }

    #[test]
    fn nested_s_blossom_relabeled_t_then_expanded() {
        assert_eq!(
            solve(&[
                (1, 2, 19.0),
                (1, 3, 20.0),
                (1, 8, 8.0),
                (2, 3, 25.0),
                (2, 4, 18.0),
                (3, 5, 18.0),
                (4, 5, 13.0),
                (4, 7, 7.0),
                (5, 6, 7.0)
            ]),
            vec![X, 8, 3, 2, 7, 6, 5, 4, 1]
        );
    }

    #[test]
    fn t_blossom_multiple_relabel_paths() {
        assert_eq!(
            solve(&[
                (1, 2, 45.0),
                (1, 5, 45.0),
                (2, 3, 50.0),
                (3, 4, 45.0),
                (4, 5, 50.0),
                (1, 6, 30.0),
                (3, 9, 35.0),
                (4, 8, 35.0),
                (5, 7, 26.0),
                (9, 10, 5.0)
            ]),
            vec![X, 6, 3, 2, 8, 7, 1, 5, 4, 10, 9]
        );
        assert_eq!(
            solve(&[
                (1, 2, 45.0),
                (1, 5, 45.0),
                (2, 3, 50.0),
                (3, 4, 45.0),
                (4, 5, 50.0),
                (1, 6, 30.0),
                (3, 9, 35.0),
                (4, 8, 26.0),
                (5, 7, 40.0),
                (9, 10, 5.0)
            ]),
            vec![X, 6, 3, 2, 8, 7, 1, 5, 4, 10, 9]
        );
    }

    #[test]
    fn t_expand_creates_new_least_slack_edge() {
        assert_eq!(
            solve(&[
                (1, 2, 45.0),
                (1, 5, 45.0),
                (2, 3, 50.0),
                (3, 4, 45.0),
                (4, 5, 50.0),
                (1, 6, 30.0),
                (3, 9, 35.0),
                (4, 8, 28.0),
                (5, 7, 26.0),
                (9, 10, 5.0)
            ]),
            vec![X, 6, 3, 2, 8, 7, 1, 5, 4, 10, 9]
        );
    }

    #[test]
    fn nested_t_blossom_expand_on_augmenting_path() {
        assert_eq!(
            solve(&[
                (1, 2, 45.0),
                (1, 7, 45.0),
                (2, 3, 50.0),
                (3, 4, 45.0),
                (4, 5, 95.0),
                (4, 6, 94.0),
                (5, 6, 94.0),
                (6, 7, 50.0),
                (1, 8, 30.0),
                (3, 11, 35.0),
                (5, 9, 36.0),
                (7, 10, 26.0),
                (11, 12, 5.0)
            ]),
            vec![X, 8, 3, 2, 6, 9, 4, 10, 1, 5, 7, 12, 11]
        );
    }

    #[test]
    fn nested_s_blossom_relabel_expand_recursively() {
        assert_eq!(
            solve(&[
                (1, 2, 40.0),
                (1, 3, 40.0),
                (2, 3, 60.0),
                (2, 4, 55.0),
                (3, 5, 55.0),
                (4, 5, 50.0),
                (1, 8, 15.0),
                (5, 7, 30.0),
                (7, 6, 10.0),
                (8, 10, 10.0),
                (4, 9, 30.0)
            ]),
            vec![X, 2, 1, 5, 9, 3, 7, 6, 10, 4, 8]
        );
    }

    #[test]
    fn fractional_weights() {
        assert_eq!(
            solve(&[(1, 2, 1.5), (1, 3, 1.8), (2, 3, 2.0), (3, 4, 1.4)]),
            vec![X, 2, 1, 4, 3]
        );
    }
}
