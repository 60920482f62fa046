//! Big-endian mixed-radix encoding of tuples (first coordinate most significant).

/// Index of `t` among all tuples over `0..q`, lexicographically.
pub fn encode(t: &[u32], q: u32) -> usize {
    t.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

/// Inverse of [`encode`] for tuples of length `k`.
pub fn decode(mut index: usize, q: u32, k: usize) -> Vec<u32> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = (index % q as usize) as u32;
        index /= q as usize;
    }
    t
}

/// Mixed-radix variant of [`encode`].
pub fn encode_mixed(t: &[u32], radices: &[u32]) -> usize {
    t.iter().zip(radices).fold(0usize, |acc, (&x, &r)| acc * r as usize + x as usize)
}

/// Mixed-radix variant of [`decode`].
pub fn decode_mixed(mut index: usize, radices: &[u32]) -> Vec<u32> {
    let mut t = vec![0; radices.len()];
    for (slot, &r) in t.iter_mut().zip(radices).rev() {
        *slot = (index % r as usize) as u32;
        index /= r as usize;
    }
    t
}

/// `q^k`, or `None` on overflow.
pub fn count(q: u32, k: usize) -> Option<usize> {
    (q as usize).checked_pow(u32::try_from(k).ok()?)
}

/// Lexicographic odometer over the product `0..r_1 × … × 0..r_k`.
#[derive(Clone, Debug)]
pub struct Odometer {
    radices: Vec<u32>,
    current: Vec<u32>,
    done: bool,
}

impl Odometer {
    pub fn new(radices: Vec<u32>) -> Self {
        let done = radices.contains(&0);
        Odometer { current: vec![0; radices.len()], radices, done }
    }

    pub fn uniform(q: u32, k: usize) -> Self {
        Self::new(vec![q; k])
    }

    /// The current tuple, or `None` once exhausted.
    pub fn get(&self) -> Option<&[u32]> {
        (!self.done).then_some(self.current.as_slice())
    }

    pub fn advance(&mut self) {
        for i in (0..self.current.len()).rev() {
            self.current[i] += 1;
            if self.current[i] < self.radices[i] {
                return;
            }
            self.current[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for Odometer {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.get()?.to_vec();
        self.advance();
        Some(out)
    }
}
