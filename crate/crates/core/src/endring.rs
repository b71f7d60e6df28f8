//! Endomorphism rings of formal sums, as explicit finite rings.

use crate::cat::{CategoryPresentation, Mor, Obj};
use crate::field::{space_size, Prime};

/// The endomorphism ring of an object, with its canonical coordinate basis
/// and a multiplication table in that basis.
pub struct EndRing {
    pub object: Obj,
    pub p: Prime,
    pub dim: usize,
    pub basis: Vec<Mor>,
    /// table[a][b] = coordinates of basis[a] o basis[b]
    pub table: Vec<Vec<Vec<u64>>>,
    pub unit: Vec<u64>,
}

pub fn end_ring(pres: &CategoryPresentation, x: &Obj) -> EndRing {
    let dim = pres.hom_total(x, x);
    let basis: Vec<Mor> = (0..dim)
        .map(|b| {
            let mut flat = vec![0u64; dim];
            flat[b] = 1;
            Mor::from_flat(pres, x.clone(), x.clone(), &flat)
        })
        .collect();
    let table = basis
        .iter()
        .map(|a| basis.iter().map(|b| Mor::compose(pres, a, b).flatten()).collect())
        .collect();
    let unit = Mor::identity(pres, x).flatten();
    EndRing { object: x.clone(), p: pres.prime(), dim, basis, table, unit }
}

impl EndRing {
    /// Ring order p^dim, if it fits in u64.
    pub fn element_count(&self) -> Option<u64> {
        space_size(self.p, self.dim)
    }

    /// Multiply two coordinate vectors through the table.
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.dim];
        for (i, &ac) in a.iter().enumerate() {
            if ac == 0 {
                continue;
            }
            for (j, &bc) in b.iter().enumerate() {
                if bc == 0 {
                    continue;
                }
                let scale = p.mul(ac, bc);
                for (c, &coeff) in self.table[i][j].iter().enumerate() {
                    out[c] = p.add(out[c], p.mul(scale, coeff));
                }
            }
        }
        out
    }

    /// Re-check the table against direct composition on all basis pairs,
    /// and both unit laws.
    pub fn verify_against_compose(&self, pres: &CategoryPresentation) {
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                assert_eq!(self.table[i][j], Mor::compose(pres, a, b).flatten());
            }
            assert_eq!(self.mul(&self.unit, &a.flatten()), a.flatten());
            assert_eq!(self.mul(&a.flatten(), &self.unit), a.flatten());
        }
    }
}
