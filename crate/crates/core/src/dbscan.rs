//! Density-based outlier removal on voxel clouds.
//!
//! Neighbor queries go through a uniform grid whose cell edge is `ceil(eps)`,
//! so only the 27 surrounding cells are scanned. Distances are still checked
//! exactly, so results are identical to a quadratic scan.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pointcloud::{Point, PointCloudSample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbscanParams {
    /// Neighborhood radius in voxels (inclusive).
    pub eps: f64,
    /// Neighbors required for a core point, counting the point itself.
    pub min_pts: usize,
}

impl Default for DbscanParams {
    fn default() -> Self {
        Self { eps: 2.0, min_pts: 8 }
    }
}

impl DbscanParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() || self.min_pts == 0 {
            return Err(Error::BadDbscanParams);
        }
        Ok(())
    }

    #[inline]
    fn within(&self, d2: u64) -> bool {
        d2 as f64 <= self.eps * self.eps
    }
}

/// Per-point cluster id; `None` marks noise.
///
/// Clusters are numbered in the order their seed core point appears in the
/// input, and a border point reachable from several clusters belongs to the
/// first of them.
pub fn dbscan_labels(points: &[Point], params: &DbscanParams) -> Result<Vec<Option<u32>>> {
    params.validate()?;
    const UNSEEN: u32 = u32::MAX;
    const NOISE: u32 = u32::MAX - 1;

    let grid = Grid::new(points, params.eps);
    let mut labels = vec![UNSEEN; points.len()];
    let mut neighbors = Vec::new();
    let mut queue = VecDeque::new();
    let mut next = 0u32;

    for i in 0..points.len() {
        if labels[i] != UNSEEN {
            continue;
        }
        grid.neighbors(points, i, params, &mut neighbors);
        if neighbors.len() < params.min_pts {
            labels[i] = NOISE;
            continue;
        }
        let cluster = next;
        next += 1;
        labels[i] = cluster;
        queue.extend(neighbors.iter().copied());
        while let Some(q) = queue.pop_front() {
            match labels[q] {
                NOISE => labels[q] = cluster,
                UNSEEN => {
                    labels[q] = cluster;
                    grid.neighbors(points, q, params, &mut neighbors);
                    if neighbors.len() >= params.min_pts {
                        queue.extend(neighbors.iter().copied().filter(|&j| labels[j] == UNSEEN || labels[j] == NOISE));
                    }
                }
                _ => {}
            }
        }
    }
    Ok(labels.into_iter().map(|l| (l < NOISE).then_some(l)).collect())
}

/// Removes noise points. With `largest_only`, keeps just the biggest cluster
/// (lowest id on ties).
pub fn dbscan_filter(
    pc: &PointCloudSample,
    params: &DbscanParams,
    largest_only: bool,
) -> Result<PointCloudSample> {
    let labels = dbscan_labels(pc.points(), params)?;
    let keep: Vec<bool> = if largest_only {
        let mut sizes: Vec<usize> = Vec::new();
        for &l in labels.iter().flatten() {
            let l = l as usize;
            if sizes.len() <= l {
                sizes.resize(l + 1, 0);
            }
            sizes[l] += 1;
        }
        let biggest = sizes
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, usize)>, (id, &n)| match best {
                Some((_, m)) if m >= n => best,
                _ => Some((id, n)),
            })
            .map(|(id, _)| id as u32);
        labels.iter().map(|&l| l.is_some() && l == biggest).collect()
    } else {
        labels.iter().map(Option::is_some).collect()
    };
    Ok(pc.retain_by(&keep))
}

/// Points bucketed into cubic cells, stored as a CSR list.
struct Grid {
    cell: u32,
    origin: (u32, u32, u32),
    cells: (usize, usize, usize),
    starts: Vec<usize>,
    members: Vec<usize>,
}

impl Grid {
    fn new(points: &[Point], eps: f64) -> Self {
        let cell = (libm::ceil(eps).min(f64::from(u32::MAX)) as u32).max(1);
        let min = points.iter().fold((u32::MAX, u32::MAX, u32::MAX), |m, p| {
            (m.0.min(p.x), m.1.min(p.y), m.2.min(p.z))
        });
        let max = points.iter().fold((0, 0, 0), |m, p| (m.0.max(p.x), m.1.max(p.y), m.2.max(p.z)));
        let origin = if points.is_empty() { (0, 0, 0) } else { min };
        let span = |lo: u32, hi: u32| if points.is_empty() { 1 } else { ((hi - lo) / cell) as usize + 1 };
        let cells = (span(origin.0, max.0), span(origin.1, max.1), span(origin.2, max.2));

        let mut grid = Self { cell, origin, cells, starts: Vec::new(), members: Vec::new() };
        let ids: Vec<usize> = points.iter().map(|p| grid.cell_id(grid.coords(p))).collect();
        let total = cells.0 * cells.1 * cells.2;
        let mut starts = vec![0usize; total + 1];
        for &id in &ids {
            starts[id + 1] += 1;
        }
        for i in 0..total {
            starts[i + 1] += starts[i];
        }
        let mut fill = starts.clone();
        let mut members = vec![0usize; points.len()];
        for (i, &id) in ids.iter().enumerate() {
            members[fill[id]] = i;
            fill[id] += 1;
        }
        grid.starts = starts;
        grid.members = members;
        grid
    }

    #[inline]
    fn coords(&self, p: &Point) -> (usize, usize, usize) {
        (
            ((p.x - self.origin.0) / self.cell) as usize,
            ((p.y - self.origin.1) / self.cell) as usize,
            ((p.z - self.origin.2) / self.cell) as usize,
        )
    }

    #[inline]
    fn cell_id(&self, (cx, cy, cz): (usize, usize, usize)) -> usize {
        (cz * self.cells.1 + cy) * self.cells.0 + cx
    }

    /// Fills `out` with every index within `eps` of `points[i]`, itself included.
    fn neighbors(&self, points: &[Point], i: usize, params: &DbscanParams, out: &mut Vec<usize>) {
        out.clear();
        let p = &points[i];
        let (cx, cy, cz) = self.coords(p);
        let range = |c: usize, n: usize| c.saturating_sub(1)..=(c + 1).min(n - 1);
        for z in range(cz, self.cells.2) {
            for y in range(cy, self.cells.1) {
                for x in range(cx, self.cells.0) {
                    let id = self.cell_id((x, y, z));
                    for &j in &self.members[self.starts[id]..self.starts[id + 1]] {
                        if params.within(p.dist2(&points[j])) {
                            out.push(j);
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(pts: &[(u32, u32, u32)], dims: (usize, usize, usize)) -> PointCloudSample {
        PointCloudSample::new(
            pts.iter().map(|&(x, y, z)| (Point::new(x, y, z), [255, 255, 255])).collect(),
            dims,
        )
        .unwrap()
    }

    #[test]
    fn params_are_validated() {
        let pc = cloud(&[], (1, 1, 1));
        for p in [
            DbscanParams { eps: 0.0, min_pts: 1 },
            DbscanParams { eps: -1.0, min_pts: 1 },
            DbscanParams { eps: 1.0, min_pts: 0 },
        ] {
            assert_eq!(dbscan_filter(&pc, &p, false), Err(Error::BadDbscanParams));
        }
    }

    #[test]
    fn empty_cloud_stays_empty() {
        let pc = cloud(&[], (4, 4, 4));
        assert!(dbscan_filter(&pc, &DbscanParams::default(), false).unwrap().is_empty());
    }

    #[test]
    fn tight_ball_is_one_cluster() {
        // 2x2x2 cube: max distance sqrt(3) < 2.
        let pts: Vec<_> = (0..8u32).map(|i| (10 + (i & 1), 10 + ((i >> 1) & 1), 10 + (i >> 2))).collect();
        let pc = cloud(&pts, (32, 32, 32));
        let labels = dbscan_labels(pc.points(), &DbscanParams { eps: 2.0, min_pts: 4 }).unwrap();
        assert!(labels.iter().all(|&l| l == Some(0)));
    }

    #[test]
    fn isolated_point_is_removed() {
        let mut pts: Vec<_> = (0..8u32).map(|i| (i & 1, (i >> 1) & 1, i >> 2)).collect();
        pts.push((200, 0, 0));
        let pc = cloud(&pts, (256, 2, 2));
        let kept = dbscan_filter(&pc, &DbscanParams { eps: 2.0, min_pts: 4 }, false).unwrap();
        assert_eq!(kept.len(), 8);
        assert!(kept.points().iter().all(|p| p.x < 2));
    }

    #[test]
    fn border_point_goes_to_first_cluster() {
        // Two dense lines with a border point between them: (5,0,0) is within
        // eps=2 of both (3,0,0) and (7,0,0) but has only 3 neighbors.
        let mut pts: Vec<_> = (0..=3u32).map(|x| (x, 0, 0)).collect();
        pts.extend((7..=10u32).map(|x| (x, 0, 0)));
        pts.push((5, 0, 0));
        let pc = cloud(&pts, (16, 1, 1));
        let labels = dbscan_labels(pc.points(), &DbscanParams { eps: 2.0, min_pts: 4 }).unwrap();
        let by_x: Vec<_> = pc.points().iter().zip(&labels).map(|(p, l)| (p.x, *l)).collect();
        assert!(by_x.contains(&(5, Some(0))));
        assert!(by_x.contains(&(10, Some(1))));
    }

    #[test]
    fn largest_cluster_only() {
        let mut pts: Vec<_> = (0..5u32).map(|x| (x, 0, 0)).collect();
        pts.extend((20..30u32).map(|x| (x, 0, 0)));
        let pc = cloud(&pts, (32, 1, 1));
        let p = DbscanParams { eps: 1.0, min_pts: 2 };
        assert_eq!(dbscan_filter(&pc, &p, false).unwrap().len(), 15);
        let big = dbscan_filter(&pc, &p, true).unwrap();
        assert_eq!(big.len(), 10);
        assert_eq!(big.points()[0].x, 20);
    }
}
