//! Dense bit matrices for incidence and neighbor relations.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row_count(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_count(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Column indices set in row `r`, increasing.
    pub fn row(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn col(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, c)).collect()
    }

    /// Number of columns set in both rows.
    pub fn row_overlap(&self, a: usize, b: usize) -> usize {
        self.row_words(a).iter().zip(self.row_words(b)).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Each row as a hex string, most significant nibble first, column 0
    /// being the leading bit.
    pub fn hex_rows(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| {
                let nibbles = self.cols.div_ceil(4);
                (0..nibbles)
                    .map(|k| {
                        let v = (0..4).fold(0u32, |acc, b| {
                            let c = 4 * k + b;
                            (acc << 1) | (c < self.cols && self.get(r, c)) as u32
                        });
                        char::from_digit(v, 16).unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_hex_rows(rows: &[String], cols: usize) -> Option<BitMatrix> {
        let mut m = BitMatrix::new(rows.len(), cols);
        for (r, s) in rows.iter().enumerate() {
            for (k, ch) in s.chars().enumerate() {
                let v = ch.to_digit(16)?;
                for b in 0..4 {
                    let c = 4 * k + b;
                    if v >> (3 - b) & 1 == 1 {
                        if c >= cols {
                            return None;
                        }
                        m.set(r, c, true);
                    }
                }
            }
        }
        Some(m)
    }

    /// Plain-text 0/1 grid, one row per line.
    pub fn grid(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct BitMatrixRepr {
    rows: usize,
    cols: usize,
    hex: Vec<String>,
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BitMatrixRepr { rows: self.rows, cols: self.cols, hex: self.hex_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BitMatrixRepr::deserialize(d)?;
        if repr.hex.len() != repr.rows {
            return Err(serde::de::Error::custom("row count mismatch"));
        }
        BitMatrix::from_hex_rows(&repr.hex, repr.cols).ok_or_else(|| serde::de::Error::custom("bad hex row"))
    }
}
