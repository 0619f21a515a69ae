//! Suffix array with LCP and constant-time longest-common-extension queries.

pub(crate) struct SuffixIndex {
    sa: Vec<u32>,
    rank: Vec<u32>,
    lcp: Vec<u32>,
}

impl SuffixIndex {
    pub(crate) fn new(s: &[u8]) -> Self {
        let sa = suffix_array(s);
        let mut rank = vec![0u32; s.len()];
        for (r, &i) in sa.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        let lcp = kasai(s, &sa, &rank);
        Self { sa, rank, lcp }
    }

    /// `lcp[r]` is the longest common prefix of the suffixes ranked `r-1` and `r`; `lcp[0] = 0`.
    pub(crate) fn lcp(&self) -> &[u32] {
        &self.lcp
    }

    #[allow(dead_code)]
    pub(crate) fn sa(&self) -> &[u32] {
        &self.sa
    }
}

/// Prefix doubling with two counting-sort passes per round.
fn suffix_array(s: &[u8]) -> Vec<u32> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = s.iter().map(|&c| u32::from(c) + 1).collect();
    let mut tmp = vec![0u32; n];
    let mut buf = vec![0u32; n];
    let mut classes = 257usize;
    let mut k = 1usize;
    loop {
        let key2 = |i: u32| -> usize {
            let j = i as usize + k;
            if j < n { rank[j] as usize } else { 0 }
        };
        // sort by second key, then stable by first key
        let mut count = vec![0usize; classes + 1];
        for i in 0..n as u32 {
            count[key2(i)] += 1;
        }
        let mut sum = 0;
        for c in count.iter_mut() {
            let t = *c;
            *c = sum;
            sum += t;
        }
        for i in 0..n as u32 {
            let kk = key2(i);
            buf[count[kk]] = i;
            count[kk] += 1;
        }
        let mut count = vec![0usize; classes + 1];
        for &i in &buf {
            count[rank[i as usize] as usize] += 1;
        }
        let mut sum = 0;
        for c in count.iter_mut() {
            let t = *c;
            *c = sum;
            sum += t;
        }
        for &i in &buf {
            let kk = rank[i as usize] as usize;
            sa[count[kk]] = i;
            count[kk] += 1;
        }
        tmp[sa[0] as usize] = 1;
        let mut c = 1u32;
        for w in 1..n {
            let (a, b) = (sa[w - 1], sa[w]);
            if rank[a as usize] != rank[b as usize] || key2(a) != key2(b) {
                c += 1;
            }
            tmp[b as usize] = c;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if c as usize == n {
            break;
        }
        classes = c as usize + 1;
        k *= 2;
    }
    sa
}

fn kasai(s: &[u8], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Longest-common-extension oracle over a fixed string.
pub(crate) struct Lce {
    n: usize,
    rank: Vec<u32>,
    table: Vec<Vec<u32>>,
}

impl Lce {
    pub(crate) fn new(s: &[u8]) -> Self {
        let idx = SuffixIndex::new(s);
        let n = s.len();
        let mut table = vec![idx.lcp.clone()];
        let mut span = 1;
        while 2 * span <= n {
            let prev = table.last().unwrap();
            let next: Vec<u32> = (0..=n - 2 * span)
                .map(|i| prev[i].min(prev[i + span]))
                .collect();
            table.push(next);
            span *= 2;
        }
        Self { n, rank: idx.rank, table }
    }

    /// Length of the longest common prefix of the suffixes starting at `i` and `j`.
    pub(crate) fn lce(&self, i: usize, j: usize) -> usize {
        if i >= self.n || j >= self.n {
            return 0;
        }
        if i == j {
            return self.n - i;
        }
        let (a, b) = {
            let (ra, rb) = (self.rank[i] as usize, self.rank[j] as usize);
            if ra < rb { (ra + 1, rb) } else { (rb + 1, ra) }
        };
        let len = b - a + 1;
        let lvl = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let t = &self.table[lvl];
        t[a].min(t[b + 1 - (1 << lvl)]) as usize
    }
}
