//! Output formats: CSV with `#` metadata headers and the binary Husimi grid.
//!
//! Floats in CSV are written with 17 significant digits so values round-trip.

use std::io::{Read, Write};

use crate::spin::{HusimiGrid, Spin};
use crate::{Error, Result};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `Q` as `theta,phi,Q` rows.
pub fn write_husimi_csv<W: Write>(grid: &HusimiGrid, mut out: W) -> Result<()> {
    writeln!(out, "# husimi j={} n_theta={} n_phi={}", grid.spin, grid.n_theta(), grid.n_phi())?;
    writeln!(out, "# columns: theta,phi,Q")?;
    for i in 0..grid.n_theta() {
        for l in 0..grid.n_phi() {
            writeln!(
                out,
                "{},{},{}",
                fmt_f64(grid.theta[i]),
                fmt_f64(grid.phi[l]),
                fmt_f64(grid.value(i, l))
            )?;
        }
    }
    Ok(())
}

/// Magic bytes opening a binary Husimi grid.
pub const HUSIMI_MAGIC: [u8; 8] = *b"KTHUSIMI";
/// Size of the binary header in bytes.
pub const HUSIMI_HEADER_LEN: usize = 64;
const HUSIMI_VERSION: u32 = 1;
const ENDIAN_TAG: u32 = 0x0102_0304;

/// Binary layout (all little-endian):
///
/// ```text
/// 0..8    magic "KTHUSIMI"
/// 8..12   format version (u32, = 1)
/// 12..16  endianness tag 0x01020304 (u32)
/// 16..20  2j (u32)
/// 20..24  n_theta (u32)
/// 24..28  n_phi (u32)
/// 28..64  zero
/// then    theta[n_theta], theta_weights[n_theta], phi[n_phi],
///         values[n_theta * n_phi] (f64, row-major in theta)
/// ```
pub fn write_husimi_binary<W: Write>(grid: &HusimiGrid, mut out: W) -> Result<()> {
    let mut header = [0u8; HUSIMI_HEADER_LEN];
    header[0..8].copy_from_slice(&HUSIMI_MAGIC);
    header[8..12].copy_from_slice(&HUSIMI_VERSION.to_le_bytes());
    header[12..16].copy_from_slice(&ENDIAN_TAG.to_le_bytes());
    header[16..20].copy_from_slice(&grid.spin.twice().to_le_bytes());
    header[20..24].copy_from_slice(&(grid.n_theta() as u32).to_le_bytes());
    header[24..28].copy_from_slice(&(grid.n_phi() as u32).to_le_bytes());
    out.write_all(&header)?;
    for v in grid
        .theta
        .iter()
        .chain(&grid.theta_weights)
        .chain(&grid.phi)
        .chain(&grid.values)
    {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_husimi_binary<R: Read>(mut input: R) -> Result<HusimiGrid> {
    let mut header = [0u8; HUSIMI_HEADER_LEN];
    input.read_exact(&mut header)?;
    if header[0..8] != HUSIMI_MAGIC {
        return Err(Error::Format("not a Husimi grid (bad magic)".into()));
    }
    let word = |at: usize| u32::from_le_bytes(header[at..at + 4].try_into().unwrap());
    if word(8) != HUSIMI_VERSION {
        return Err(Error::Format(format!("unsupported Husimi format version {}", word(8))));
    }
    if word(12) != ENDIAN_TAG {
        return Err(Error::Format("endianness tag mismatch".into()));
    }
    let spin = Spin::from_twice(word(16));
    let (n_theta, n_phi) = (word(20) as usize, word(24) as usize);
    let mut read_vec = |n: usize| -> Result<Vec<f64>> {
        let mut buf = vec![0u8; n * 8];
        input.read_exact(&mut buf)?;
        Ok(buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    };
    let theta = read_vec(n_theta)?;
    let theta_weights = read_vec(n_theta)?;
    let phi = read_vec(n_phi)?;
    let values = read_vec(n_theta * n_phi)?;
    Ok(HusimiGrid {
        spin,
        theta,
        theta_weights,
        phi,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{husimi, spin_coherent_state, HusimiResolution, SphericalPoint};

    #[test]
    fn seventeen_significant_digits() {
        let s = fmt_f64(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn binary_grid_round_trip() {
        let spin = Spin::new(2.5).unwrap();
        let grid = husimi(
            &spin_coherent_state(spin, SphericalPoint::new(0.4, 1.0)),
            HusimiResolution::new(7, 11).unwrap(),
        )
        .unwrap();
        let mut bytes = Vec::new();
        write_husimi_binary(&grid, &mut bytes).unwrap();
        assert_eq!(bytes.len(), 64 + 8 * (7 + 7 + 11 + 77));
        assert_eq!(read_husimi_binary(bytes.as_slice()).unwrap(), grid);

        bytes[0] = b'X';
        assert!(matches!(read_husimi_binary(bytes.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let spin = Spin::new(1.0).unwrap();
        let grid = husimi(
            &spin_coherent_state(spin, SphericalPoint::new(0.4, 1.0)),
            HusimiResolution::new(2, 3).unwrap(),
        )
        .unwrap();
        let mut out = Vec::new();
        write_husimi_csv(&grid, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert!(lines[0].starts_with('#') && lines[1].starts_with('#'));
        assert_eq!(lines.len(), 2 + 6);
    }
}
