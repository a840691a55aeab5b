//! Path normalization: stretch every path to start at abscissa 1,
//! then to end at abscissa `N`, then re-index into strict column order.
//! Each step only moves cells between paths or claims free cells, so the
//! union of supports never shrinks.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::{Cell, PathCollection, UpRightPath};
use crate::{Error, Result};

/// Lowest-index path whose key is extremal (`better(a, b)` means `a` wins).
fn pick(paths: &[UpRightPath], key: impl Fn(&UpRightPath) -> usize, better: impl Fn(usize, usize) -> bool) -> usize {
    let mut best = 0;
    for (i, p) in paths.iter().enumerate().skip(1) {
        if better(key(p), key(&paths[best])) {
            best = i;
        }
    }
    best
}

fn splice(a: &UpRightPath, b: &UpRightPath) -> UpRightPath {
    a.concat(b).expect("splice points are adjacent by construction")
}

/// Every starting abscissa becomes 1.
pub fn normalize_starts(c: &PathCollection) -> Result<PathCollection> {
    let (n, k, l) = (c.n(), c.k(), c.len());
    if l > k {
        return Err(Error::Precondition(format!("{l} paths cannot fit {k} rows")));
    }
    if l == k && l > 0 {
        return PathCollection::new(n, k, (1..=k).map(|y| UpRightPath::horizontal(y, n)).collect());
    }
    let mut paths: Vec<UpRightPath> = c.paths().to_vec();
    loop {
        if paths.iter().all(|p| p.start().x == 1) {
            return PathCollection::new(n, k, paths);
        }
        let i0 = pick(&paths, |p| p.start().x, |a, b| a > b);
        let start = paths[i0].start();
        let p = Cell::new(start.x - 1, start.y);
        let Some(i1) = paths.iter().position(|q| q.contains(p)) else {
            paths[i0] = splice(&UpRightPath::single(p), &paths[i0]);
            continue;
        };
        if paths[i1].end() != p {
            // the step out of P cannot go right (that is pi_i0's start), so it goes up
            let q = Cell::new(p.x, p.y + 1);
            let head = paths[i1].up_to(p).unwrap();
            let tail = paths[i1].from_point(q).unwrap();
            paths[i0] = splice(&head, &paths[i0]);
            paths[i1] = tail;
            continue;
        }
        // pi_i1 ends at P: absorb it, then re-seed pi_i1 in column 1
        paths[i0] = splice(&paths[i1], &paths[i0]);
        let occupied = |paths: &[UpRightPath], i1: usize, cell: Cell| {
            paths.iter().enumerate().any(|(r, q)| r != i1 && q.contains(cell))
        };
        if let Some(y) = (1..=k).find(|&y| !occupied(&paths, i1, Cell::new(1, y))) {
            paths[i1] = UpRightPath::single(Cell::new(1, y));
            continue;
        }
        // column 1 is full with fewer than k other paths, so one of them
        // climbs inside column 1 from its start; hand that start over
        let donor = (0..paths.len())
            .find(|&r| r != i1 && paths[r].len() > 1 && paths[r].start().x == 1 && paths[r].points()[1].x == 1)
            .ok_or_else(|| Error::InvalidPath("no donor path in a full first column".into()))?;
        let cell = paths[donor].start();
        paths[donor] = UpRightPath::new(paths[donor].points()[1..].to_vec())?;
        paths[i1] = UpRightPath::single(cell);
    }
}

/// Every ending abscissa becomes `N`; requires all starts at abscissa 1.
pub fn normalize_ends(c: &PathCollection) -> Result<PathCollection> {
    if !c.starts_at_one() {
        return Err(Error::Precondition("every path must start at abscissa 1".into()));
    }
    let (n, k) = (c.n(), c.k());
    let mut paths: Vec<UpRightPath> = c.paths().to_vec();
    loop {
        if paths.iter().all(|p| p.end().x == n) {
            return PathCollection::new(n, k, paths);
        }
        let i0 = pick(&paths, |p| p.end().x, |a, b| a < b);
        let end = paths[i0].end();
        let p = Cell::new(end.x + 1, end.y);
        let Some(i1) = paths.iter().position(|q| q.contains(p)) else {
            paths[i0] = splice(&paths[i0], &UpRightPath::single(p));
            continue;
        };
        // P is not pi_i1's start (starts sit at abscissa 1) and the step into
        // P cannot come from the left (that is pi_i0's end): it comes from below
        let q = Cell::new(p.x, p.y - 1);
        let tail = paths[i1].from_point(p).unwrap();
        let head = paths[i1]
            .up_to(q)
            .ok_or_else(|| Error::InvalidPath(format!("path {i1} does not enter {p:?} from below")))?;
        paths[i0] = splice(&paths[i0], &tail);
        paths[i1] = head;
    }
}

/// Re-indexes full-span disjoint paths bottom-first and checks the strict
/// column order.
pub fn order_paths(c: &PathCollection) -> Result<PathCollection> {
    if !c.starts_at_one() || !c.ends_at_n() {
        return Err(Error::Precondition("paths must span abscissas 1..=N".into()));
    }
    let mut paths = c.paths().to_vec();
    paths.sort_by_key(|p| p.start().y);
    let out = PathCollection::new(c.n(), c.k(), paths)?;
    if !out.satisfies_strict_order() {
        return Err(Error::InvalidPath("full-span paths are not totally ordered".into()));
    }
    Ok(out.with_ordered(true))
}

/// Random collection of `l` disjoint paths on `{1..n} x {1..k}`: each path
/// starts at a random free cell and takes random free up/right steps,
/// stopping at a random length or when boxed in. Returns fewer than `l`
/// paths only when the grid fills up.
pub fn random_disjoint_collection<R: Rng + ?Sized>(n: usize, k: usize, l: usize, rng: &mut R) -> PathCollection {
    let mut free = alloc::vec![true; n * k];
    let idx = |c: Cell| (c.x - 1) * k + c.y - 1;
    let mut paths = Vec::with_capacity(l);
    for _ in 0..l {
        let cells: Vec<Cell> = (0..n * k)
            .filter(|&i| free[i])
            .map(|i| Cell::new(i / k + 1, i % k + 1))
            .collect();
        if cells.is_empty() {
            break;
        }
        let mut cur = cells[rng.random_range(0..cells.len())];
        free[idx(cur)] = false;
        let mut points = alloc::vec![cur];
        let target = rng.random_range(1..=n + k);
        while points.len() < target {
            let mut options = Vec::with_capacity(2);
            if cur.x < n && free[idx(Cell::new(cur.x + 1, cur.y))] {
                options.push(Cell::new(cur.x + 1, cur.y));
            }
            if cur.y < k && free[idx(Cell::new(cur.x, cur.y + 1))] {
                options.push(Cell::new(cur.x, cur.y + 1));
            }
            if options.is_empty() {
                break;
            }
            cur = options[rng.random_range(0..options.len())];
            free[idx(cur)] = false;
            points.push(cur);
        }
        paths.push(UpRightPath::new(points).expect("unit steps"));
    }
    PathCollection::new(n, k, paths).expect("cells drawn from the free set")
}
