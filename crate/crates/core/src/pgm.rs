//! Binary greymap (P5) encoding, 8 bits per pixel.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreyImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmError(String);

impl fmt::Display for PgmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed PGM: {}", self.0)
    }
}

impl std::error::Error for PgmError {}

impl GreyImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        assert_eq!(pixels.len(), width * height, "pixel buffer size");
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn encode(&self) -> Vec<u8> {
        let header = format!("P5\n{} {}\n255\n", self.width, self.height);
        let mut out = Vec::with_capacity(header.len() + self.pixels.len());
        out.extend_from_slice(header.as_bytes());
        out.extend_from_slice(&self.pixels);
        out
    }

    /// Parses the subset written by [`GreyImage::encode`] (maxval 255,
    /// whitespace-separated header, no comments).
    pub fn decode(bytes: &[u8]) -> Result<Self, PgmError> {
        let mut fields = Vec::with_capacity(4);
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(PgmError("truncated header".into()));
            }
            fields.push(
                std::str::from_utf8(&bytes[start..pos])
                    .map_err(|_| PgmError("non-ascii header".into()))?,
            );
        }
        // exactly one whitespace byte separates maxval from the raster
        pos += 1;
        if fields[0] != "P5" {
            return Err(PgmError(format!("magic {:?}", fields[0])));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| PgmError(format!("bad number {s:?}")))
        };
        let (width, height, maxval) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
        if maxval != 255 {
            return Err(PgmError(format!("maxval {maxval}")));
        }
        let raster = bytes
            .get(pos..)
            .filter(|r| r.len() == width * height)
            .ok_or_else(|| PgmError("raster size".into()))?;
        Ok(Self::new(width, height, raster.to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let img = GreyImage::new(3, 2, vec![0, 128, 255, 255, 128, 0]);
        let bytes = img.encode();
        assert!(bytes.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(&bytes[bytes.len() - 6..], &[0, 128, 255, 255, 128, 0]);
        assert_eq!(GreyImage::decode(&bytes).unwrap(), img);
    }

    #[test]
    fn rejects_wrong_magic() {
        assert!(GreyImage::decode(b"P2\n1 1\n255\n\x00").is_err());
        assert!(GreyImage::decode(b"P5\n2 2\n255\n\x00").is_err());
    }
}
