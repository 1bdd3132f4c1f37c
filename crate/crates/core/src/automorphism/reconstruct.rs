//! Recovering the marking permutation behind an automorphism.
//!
//! For a subset `A` of the markings, `Γ_A` is the two-vertex tree whose vertex
//! `v_A` carries the legs in `A`. An automorphism sends `Γ_A` to some `Γ_{A'}`
//! and `v_A` to the vertex carrying `A'`. Reading this off for all 2-subsets
//! and intersecting pins down where each marking goes.

use crate::complex::ConeComplex;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::Split;

use super::{sn_action, ComplexAutomorphism};

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn image_split(cx: &ConeComplex, f: &ComplexAutomorphism, s: &Split) -> Result<Split> {
    let r = cx
        .ray_of_split(s)
        .ok_or_else(|| Error::InvalidSplit(s.to_string()))?;
    Ok(cx.ray_split(f.rays().apply(r)))
}

/// `L(f(v_A))` as a bitset (marking `i` at bit `i - 1`). When both parts of
/// the image have size `|A|`, the part containing the image of a 2-subset
/// of `A` is taken.
pub fn image_side(cx: &ConeComplex, f: &ComplexAutomorphism, a: u64) -> Result<u64> {
    let n = cx.n();
    let img = image_split(cx, f, &Split::from_mask(n, a)?)?;
    let k = a.count_ones() as usize;
    if let Some(part) = img.part_of_size(k) {
        return Ok(part);
    }
    if n < 5 {
        return Err(Error::Reconstruction(format!(
            "both image parts have size {k}; n = {n} is too small to tell the vertices apart"
        )));
    }
    let low = bits(a);
    let pair = (1 << low[0]) | (1 << low[1]);
    let p = image_side(cx, f, pair)?;
    if img.side_mask() & p == p {
        Ok(img.side_mask())
    } else if img.complement_mask() & p == p {
        Ok(img.complement_mask())
    } else {
        Err(Error::Reconstruction(format!(
            "image of a 2-subset of {:?} lies in neither part of {img}",
            markings(a)
        )))
    }
}

fn markings(mask: u64) -> Vec<usize> {
    bits(mask).into_iter().map(|i| i + 1).collect()
}

fn pair(i: usize, j: usize) -> u64 {
    (1 << i) | (1 << j)
}

/// The permutation `σ` with `sn_action(σ) = f`, following the constructive
/// argument step by step and reporting the first step that fails.
pub fn reconstruct_sigma(cx: &ConeComplex, f: &ComplexAutomorphism) -> Result<Permutation> {
    let n = cx.n();
    if n < 5 {
        return Err(Error::Reconstruction(format!(
            "the construction needs n >= 5, got n = {n}"
        )));
    }
    let img = |i: usize, j: usize| image_side(cx, f, pair(i, j));
    let (p12, p13) = (img(0, 1)?, img(0, 2)?);
    let common = p12 & p13;
    if common.count_ones() != 1 {
        return Err(Error::Reconstruction(format!(
            "L(f(v_12)) = {:?} and L(f(v_13)) = {:?} do not meet in one marking",
            markings(p12),
            markings(p13)
        )));
    }
    let mut images = vec![0usize; n];
    images[0] = common.trailing_zeros() as usize;
    images[1] = (p12 & !common).trailing_zeros() as usize;
    images[2] = (p13 & !common).trailing_zeros() as usize;
    let p23 = img(1, 2)?;
    if p23 != pair(images[1], images[2]) {
        return Err(Error::Reconstruction(format!(
            "L(f(v_23)) = {:?}, expected {:?}",
            markings(p23),
            markings(pair(images[1], images[2]))
        )));
    }
    let p123 = image_side(cx, f, 0b111)?;
    let expected = pair(images[1], images[2]) | 1 << images[0];
    if p123 != expected {
        return Err(Error::Reconstruction(format!(
            "L(f(v_123)) = {:?}, expected {:?}",
            markings(p123),
            markings(expected)
        )));
    }
    for (j, slot) in images.iter_mut().enumerate().skip(3) {
        let p = img(0, j)?;
        if p & common == 0 {
            return Err(Error::Reconstruction(format!(
                "L(f(v_1{})) = {:?} misses the image of marking 1",
                j + 1,
                markings(p)
            )));
        }
        *slot = (p & !common).trailing_zeros() as usize;
    }
    let sigma = Permutation::from_images(images)
        .map_err(|e| Error::Reconstruction(format!("markings collide: {e}")))?;

    for i in 0..n {
        for j in i + 1..n {
            let p = img(i, j)?;
            if p != sigma.apply_mask(pair(i, j)) {
                return Err(Error::Reconstruction(format!(
                    "L(f(v_{{{},{}}})) = {:?} is not the image under {sigma}",
                    i + 1,
                    j + 1,
                    markings(p)
                )));
            }
        }
    }
    let induced = sn_action(cx, &sigma)?;
    for r in 0..cx.num_rays() {
        if f.rays().apply(r) != induced.rays().apply(r) {
            return Err(Error::Reconstruction(format!(
                "ray {} goes to {}, but {sigma} sends it to {}",
                cx.ray_split(r),
                cx.ray_split(f.rays().apply(r)),
                cx.ray_split(induced.rays().apply(r))
            )));
        }
    }
    for c in 0..cx.num_cells() {
        let expected = cx.cell(c).permuted(&sigma);
        let found = f
            .image_form(cx, c)
            .map_err(|v| Error::Reconstruction(v.to_string()))?;
        if found != expected || f.edge_map(cx, c) != induced.edge_map(cx, c) {
            return Err(Error::Reconstruction(format!(
                "cell {} maps to {found}, but {sigma} gives {expected}",
                cx.cell(c)
            )));
        }
    }
    Ok(sigma)
}

fn realizes(cx: &ConeComplex, f: &ComplexAutomorphism, c: usize, sigma: &Permutation) -> bool {
    let (Ok(image), Some(phi)) = (f.image_form(cx, c), f.edge_map(cx, c)) else {
        return false;
    };
    cx.cell(c)
        .splits()
        .iter()
        .zip(phi)
        .all(|(s, q)| s.permuted(sigma) == image.splits()[q])
}

/// A permutation `σ` of the markings with `σ(Γ) ≅ f(Γ)` and `σ(e) = f(e)` on
/// every edge of the cell `c`.
pub fn check_cellwise_permutation(
    cx: &ConeComplex,
    f: &ComplexAutomorphism,
    c: usize,
) -> Result<Permutation> {
    cx.check_cell(c)?;
    let n = cx.n();
    if n >= 5 {
        if let Ok(sigma) = reconstruct_sigma(cx, f) {
            if realizes(cx, f, c, &sigma) {
                return Ok(sigma);
            }
        }
    }
    let image = f
        .image_form(cx, c)
        .map_err(|v| Error::Reconstruction(v.to_string()))?;
    let phi = f.edge_map(cx, c).expect("image is a cell");
    // (source split, target split) per edge
    let pairs: Vec<(u64, u64)> = cx
        .cell(c)
        .splits()
        .iter()
        .zip(&phi)
        .map(|(s, &q)| (s.side_mask(), image.splits()[q].side_mask()))
        .collect();
    let same_side = |mask: u64, i: usize, j: usize| (mask >> i & 1) == (mask >> j & 1);

    fn extend(
        n: usize,
        images: &mut Vec<usize>,
        used: &mut u64,
        ok: &dyn Fn(&[usize], usize) -> bool,
        cx: &ConeComplex,
        f: &ComplexAutomorphism,
        c: usize,
    ) -> Option<Permutation> {
        let i = images.len();
        if i == n {
            let sigma = Permutation::from_images(images.clone()).expect("bijection");
            return realizes(cx, f, c, &sigma).then_some(sigma);
        }
        for x in 0..n {
            if *used >> x & 1 == 1 {
                continue;
            }
            images.push(x);
            if ok(images, i) {
                *used |= 1 << x;
                if let Some(s) = extend(n, images, used, ok, cx, f, c) {
                    return Some(s);
                }
                *used &= !(1 << x);
            }
            images.pop();
        }
        None
    }
    let ok = |images: &[usize], i: usize| {
        (0..i).all(|j| {
            pairs
                .iter()
                .all(|&(s, t)| same_side(s, i, j) == same_side(t, images[i], images[j]))
        })
    };
    extend(n, &mut Vec::with_capacity(n), &mut 0, &ok, cx, f, c).ok_or_else(|| {
        Error::Reconstruction(format!(
            "no permutation of the markings realizes f on cell {}",
            cx.cell(c)
        ))
    })
}

/// For every nested `B ⊂ A` with `2 ≤ |B|, |A| ≤ n - 2`, checks
/// `L(f(v_B)) ⊂ L(f(v_A))`. Returns the number of pairs checked.
pub fn check_cup_containment(cx: &ConeComplex, f: &ComplexAutomorphism) -> Result<usize> {
    let n = cx.n();
    if n < 5 {
        return Ok(0);
    }
    let size_ok = |m: u64| (2..=n - 2).contains(&(m.count_ones() as usize));
    let mut sides = vec![0u64; 1 << n];
    for a in (0u64..1 << n).filter(|&m| size_ok(m)) {
        sides[a as usize] = image_side(cx, f, a)?;
    }
    let mut checked = 0;
    for a in (0u64..1 << n).filter(|&m| size_ok(m)) {
        // proper non-empty submasks of a
        let mut b = (a - 1) & a;
        while b != 0 {
            if b.count_ones() >= 2 {
                let (fb, fa) = (sides[b as usize], sides[a as usize]);
                if fb & !fa != 0 {
                    return Err(Error::Reconstruction(format!(
                        "L(f(v_B)) = {:?} is not inside L(f(v_A)) = {:?} for B = {:?}, A = {:?}",
                        markings(fb),
                        markings(fa),
                        markings(b),
                        markings(a)
                    )));
                }
                checked += 1;
            }
            b = (b - 1) & a;
        }
    }
    Ok(checked)
}
