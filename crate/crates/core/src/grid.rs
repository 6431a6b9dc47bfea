//! Uniform rectangular lattices over a box domain.
//!
//! A [`Grid`] owns the index ↔ coordinate maps used by every field and
//! stencil in the crate. Supported dimensions are 1 and 2; a 1D grid is
//! stored internally as a single row so that flat indexing is uniform.

use crate::error::GridError;

/// A point in the plane. One-dimensional grids put 0.0 in the second slot.
pub type Point = [f64; 2];

/// Relative tolerance for "h divides the extent" when building a grid.
pub const DIVISIBILITY_TOL: f64 = 1e-9;

/// Uniform lattice with spacing `h` over the box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    lo: [f64; 2],
    hi: [f64; 2],
    h: f64,
    dims: [usize; 2],
    ndim: usize,
}

impl Grid {
    /// Builds a grid with `dims_k = round(extent_k / h) + 1` nodes per axis.
    ///
    /// Fails with [`GridError::NonDivisibleExtent`] when `extent_k / h` is
    /// farther than [`DIVISIBILITY_TOL`] from an integer.
    pub fn new(lo: &[f64], hi: &[f64], h: f64) -> Result<Grid, GridError> {
        let ndim = lo.len();
        if ndim != hi.len() || ndim == 0 || ndim > 2 {
            return Err(GridError::BadDimension(ndim.max(hi.len())));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(GridError::BadSpacing(h));
        }
        let mut glo = [0.0; 2];
        let mut ghi = [0.0; 2];
        let mut dims = [1usize; 2];
        for k in 0..ndim {
            if !(hi[k] > lo[k]) {
                return Err(GridError::BadBounds {
                    axis: k,
                    lo: lo[k],
                    hi: hi[k],
                });
            }
            let extent = hi[k] - lo[k];
            let ratio = extent / h;
            let cells = ratio.round();
            let rem = (ratio - cells).abs();
            if rem > DIVISIBILITY_TOL * ratio.max(1.0) {
                return Err(GridError::NonDivisibleExtent {
                    axis: k,
                    extent,
                    h,
                    rem,
                });
            }
            let nodes = cells as usize + 1;
            if nodes < 3 {
                return Err(GridError::TooFewNodes { axis: k, nodes });
            }
            glo[k] = lo[k];
            ghi[k] = hi[k];
            dims[k] = nodes;
        }
        Ok(Grid {
            lo: glo,
            hi: ghi,
            h,
            dims,
            ndim,
        })
    }

    /// Square grid over `[-1, 1]^2`, the default domain of the lab.
    pub fn unit_square(h: f64) -> Result<Grid, GridError> {
        Grid::new(&[-1.0, -1.0], &[1.0, 1.0], h)
    }

    /// Grid with the same box and half the spacing (dyadic refinement).
    pub fn refined(&self) -> Grid {
        let mut g = self.clone();
        g.h = self.h / 2.0;
        for k in 0..self.ndim {
            g.dims[k] = 2 * self.dims[k] - 1;
        }
        g
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo[..self.ndim]
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi[..self.ndim]
    }

    /// Node counts per axis.
    pub fn dims(&self) -> &[usize] {
        &self.dims[..self.ndim]
    }

    pub fn nx(&self) -> usize {
        self.dims[0]
    }

    pub fn ny(&self) -> usize {
        self.dims[1]
    }

    pub fn num_nodes(&self) -> usize {
        self.dims[0] * self.dims[1]
    }

    /// Flat index of the node `(ix, iy)`; `iy` must be 0 on 1D grids.
    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.dims[0] && iy < self.dims[1]);
        iy * self.dims[0] + ix
    }

    /// Inverse of [`Grid::index`].
    #[inline]
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index % self.dims[0], index / self.dims[0])
    }

    /// Coordinates of a node; the second component is 0.0 on 1D grids.
    #[inline]
    pub fn coord(&self, index: usize) -> Point {
        let (ix, iy) = self.split(index);
        [
            self.lo[0] + self.h * ix as f64,
            if self.ndim == 2 {
                self.lo[1] + self.h * iy as f64
            } else {
                0.0
            },
        ]
    }

    /// True when the node has a full stencil neighborhood on every axis.
    #[inline]
    pub fn is_interior(&self, index: usize) -> bool {
        let (ix, iy) = self.split(index);
        let x_ok = ix >= 1 && ix + 2 <= self.dims[0];
        if self.ndim == 1 {
            x_ok
        } else {
            x_ok && iy >= 1 && iy + 2 <= self.dims[1]
        }
    }

    #[inline]
    pub fn is_boundary(&self, index: usize) -> bool {
        !self.is_interior(index)
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.num_nodes()
    }

    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices().filter(move |&i| self.is_interior(i))
    }

    pub fn boundary_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices().filter(move |&i| self.is_boundary(i))
    }

    /// Nodes whose Euclidean distance to `center` is at most `radius`.
    ///
    /// Only the bounding box of the ball is scanned.
    pub fn nodes_in_ball(&self, center: Point, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let r2 = radius * radius;
        let (x0, x1) = self.axis_window(0, center[0], radius);
        let (y0, y1) = if self.ndim == 2 {
            self.axis_window(1, center[1], radius)
        } else {
            (0, 0)
        };
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                let i = self.index(ix, iy);
                let p = self.coord(i);
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                if dx * dx + dy * dy <= r2 {
                    out.push(i);
                }
            }
        }
        out
    }

    fn axis_window(&self, axis: usize, c: f64, radius: f64) -> (usize, usize) {
        let n = self.dims[axis];
        let lo = ((c - radius - self.lo[axis]) / self.h).ceil().max(0.0) as usize;
        let hi = ((c + radius - self.lo[axis]) / self.h).floor().min((n - 1) as f64);
        if hi < 0.0 {
            // Window entirely below the box; yield an empty range.
            return (1, 0);
        }
        (lo.min(n - 1), hi as usize)
    }
}

/// A Euclidean ball used for sup-norm and counting queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub center: Point,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: Point, radius: f64) -> BallSpec {
        assert!(radius > 0.0, "ball radius must be positive");
        BallSpec { center, radius }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_from_spacing() {
        let g = Grid::new(&[-1.0, -1.0], &[1.0, 1.0], 0.5).unwrap();
        assert_eq!(g.dims(), &[5, 5]);
        let g1 = Grid::new(&[-1.0], &[1.0], 1.0).unwrap();
        assert_eq!(g1.dims(), &[3]);
        assert_eq!(g1.num_nodes(), 3);
    }

    #[test]
    fn rejects_non_divisible_extent() {
        let err = Grid::new(&[0.0, 0.0], &[1.0, 1.0], 0.3).unwrap_err();
        assert!(matches!(err, GridError::NonDivisibleExtent { .. }));
    }

    #[test]
    fn rejects_too_coarse_axis() {
        let err = Grid::new(&[0.0], &[1.0], 1.0).unwrap_err();
        assert!(matches!(err, GridError::TooFewNodes { nodes: 2, .. }));
    }

    #[test]
    fn index_roundtrip_and_coords() {
        let g = Grid::new(&[-1.0, -1.0], &[1.0, 1.0], 0.5).unwrap();
        for i in g.indices() {
            let (ix, iy) = g.split(i);
            assert_eq!(g.index(ix, iy), i);
        }
        let c = g.coord(g.index(2, 2));
        assert_eq!(c, [0.0, 0.0]);
        assert_eq!(g.coord(0), [-1.0, -1.0]);
    }

    #[test]
    fn interior_excludes_rim() {
        let g = Grid::new(&[-1.0, -1.0], &[1.0, 1.0], 0.5).unwrap();
        assert_eq!(g.interior_indices().count(), 9);
        assert!(g.is_interior(g.index(1, 1)));
        assert!(g.is_boundary(g.index(0, 2)));
    }

    #[test]
    fn ball_nodes_respect_radius() {
        let g = Grid::new(&[-1.0, -1.0], &[1.0, 1.0], 0.25).unwrap();
        let nodes = g.nodes_in_ball([0.0, 0.0], 0.25);
        // Center plus the four axis neighbors.
        assert_eq!(nodes.len(), 5);
        let nodes = g.nodes_in_ball([0.9, 0.9], 0.2);
        assert!(!nodes.is_empty());
        assert!(nodes.iter().all(|&i| {
            let p = g.coord(i);
            let d = ((p[0] - 0.9).powi(2) + (p[1] - 0.9).powi(2)).sqrt();
            d <= 0.2
        }));
    }

    #[test]
    fn refinement_doubles_resolution() {
        let g = Grid::unit_square(0.25).unwrap();
        let f = g.refined();
        assert_eq!(f.dims(), &[17, 17]);
        assert_eq!(f.spacing(), 0.125);
    }
}
