use super::Kernel;
use crate::error::{Error, Result};
use crate::raw::PackedRaw;

/// Mirror index without repeating the edge sample: `-1 → 1`, `n → n - 2`.
/// Indices further out keep bouncing, which lets kernels reach up to the full
/// image extent.
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m >= n as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

/// Convolves each packed channel with `k` using mirror padding. Output is
/// clamped to `[0, 1]`.
///
/// Every output sample accumulates its taps in a fixed row-major order in
/// `f64`, so results do not depend on how work is scheduled.
pub fn convolve(p: &PackedRaw, k: &Kernel) -> Result<PackedRaw> {
    let (w, h) = (p.width(), p.height());
    if w == 0 || h == 0 {
        return Ok(p.clone());
    }
    if k.size() > 2 * w.min(h) + 1 {
        return Err(Error::invalid(format!(
            "kernel size {} too large for {w}x{h} image",
            k.size()
        )));
    }
    let r = k.radius();
    let n = k.size();
    // True convolution: tap (row, col) of the flipped kernel multiplies the
    // source sample at offset (row - r, col - r).
    let taps: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|row| {
            (0..n)
                .filter_map(|col| {
                    let wt = k.at(n - 1 - row, n - 1 - col);
                    (wt != 0.0).then_some((col, wt))
                })
                .collect()
        })
        .collect();
    let xmap: Vec<usize> = (0..w + 2 * r)
        .map(|i| reflect(i as isize - r as isize, w))
        .collect();

    let mut out = PackedRaw::zeros(w, h);
    let mut acc = vec![0.0f64; w];
    let mut padded = vec![0.0f64; w + 2 * r];
    for c in 0..PackedRaw::CHANNELS {
        let src = p.plane(c);
        let dst = out.plane_mut(c);
        for y in 0..h {
            acc.fill(0.0);
            for (ky, row_taps) in taps.iter().enumerate() {
                if row_taps.is_empty() {
                    continue;
                }
                let sy = reflect(y as isize + ky as isize - r as isize, h);
                let srow = &src[sy * w..(sy + 1) * w];
                for (d, &sx) in padded.iter_mut().zip(&xmap) {
                    *d = f64::from(srow[sx]);
                }
                for &(kx, wt) in row_taps {
                    for (a, &s) in acc.iter_mut().zip(&padded[kx..kx + w]) {
                        *a += wt * s;
                    }
                }
            }
            for (d, &a) in dst[y * w..(y + 1) * w].iter_mut().zip(&acc) {
                *d = a.clamp(0.0, 1.0) as f32;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::gaussian_kernel;

    #[test]
    fn reflect_without_repeat() {
        assert_eq!(reflect(-1, 5), 1);
        assert_eq!(reflect(-2, 5), 2);
        assert_eq!(reflect(5, 5), 3);
        assert_eq!(reflect(6, 5), 2);
        assert_eq!(reflect(-4, 5), 4);
        assert_eq!(reflect(-5, 5), 3);
        assert_eq!(reflect(3, 1), 0);
    }

    #[test]
    fn delta_is_identity() {
        let p = PackedRaw::from_fn(7, 5, |c, y, x| ((c * 31 + y * 7 + x * 3) % 17) as f32 / 16.0);
        let out = convolve(&p, &Kernel::delta(5).unwrap()).unwrap();
        assert_eq!(out, p);
    }

    #[test]
    fn constant_image_preserved() {
        let p = PackedRaw::filled(9, 6, [0.2, 0.5, 0.5, 0.9]);
        let k = gaussian_kernel(1.4, 0.7, 0.4, 7).unwrap();
        let out = convolve(&p, &k).unwrap();
        for c in 0..4 {
            let first = out.plane(c)[0];
            assert!(out.plane(c).iter().all(|&v| v == first));
            assert!((first - p.plane(c)[0]).abs() < 1e-6);
        }
    }

    #[test]
    fn off_center_tap_shifts_forward() {
        // A single weight right of center moves content one column right.
        let mut w = vec![0.0; 9];
        w[5] = 1.0;
        let k = Kernel::from_weights(3, w).unwrap();
        let p = PackedRaw::from_fn(6, 3, |_, y, x| (y * 6 + x) as f32 / 32.0);
        let out = convolve(&p, &k).unwrap();
        for y in 0..3 {
            for x in 1..6 {
                assert_eq!(out.get(0, y, x), p.get(0, y, x - 1));
            }
        }
    }

    #[test]
    fn kernel_larger_than_image_rejected() {
        let p = PackedRaw::zeros(2, 3);
        assert!(convolve(&p, &Kernel::delta(5).unwrap()).is_ok());
        assert!(convolve(&p, &Kernel::delta(7).unwrap()).is_err());
    }
}
