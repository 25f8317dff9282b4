//! Hexagonal multi-cell geometry: site grid, tri-sector antennas, sector
//! radiation pattern, layout bounds and the initial UE drop.
//!
//! The default two-ring layout has 19 sites / 57 sectors at 500 m
//! inter-site distance. The layout is finite; edge sites see less
//! interference than interior ones, which is left uncompensated (no
//! wrap-around).

use crate::error::{Error, Result};
use crate::propagation::{pathloss_db, rx_power_dbm, PathlossParams, ShadowingField, MIN_DISTANCE_KM};
use rand::Rng;

/// 2-D position in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn distance(&self, other: Vec2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Angle of (other - self) in degrees, in (-180, 180].
    pub fn bearing_deg(&self, other: Vec2) -> f64 {
        (other.y - self.y).atan2(other.x - self.x).to_degrees()
    }
}

/// Geometry configuration.
#[derive(Debug, Clone, Copy)]
pub struct LayoutConfig {
    /// Number of hexagonal rings around the center site (2 -> 19 sites).
    pub n_rings: u32,
    /// Inter-site distance in meters.
    pub isd_m: f64,
    /// Sectors per site; the tri-sector layout is fixed.
    pub sectors_per_site: u32,
    /// Boresight of sector 0 on every site, degrees.
    pub azimuth_offset_deg: f64,
    /// Base-station antenna height in meters.
    pub bs_height_m: f64,
    /// UE antenna height in meters.
    pub ue_height_m: f64,
    /// Per-sector transmit power in dBm.
    pub tx_power_dbm: f64,
    /// Sector element gain in dBi.
    pub element_gain_dbi: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            n_rings: 2,
            isd_m: 500.0,
            sectors_per_site: 3,
            azimuth_offset_deg: 30.0,
            bs_height_m: 20.0,
            ue_height_m: 1.5,
            tx_power_dbm: 45.0,
            element_gain_dbi: 15.0,
        }
    }
}

impl LayoutConfig {
    pub fn validate(&self) -> Result<()> {
        if self.isd_m <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "inter-site distance must be positive, got {}",
                self.isd_m
            )));
        }
        if self.sectors_per_site != 3 {
            return Err(Error::InvalidConfig(format!(
                "layout is tri-sector; sectors_per_site must be 3, got {}",
                self.sectors_per_site
            )));
        }
        if self.bs_height_m <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "BS height must be positive, got {}",
                self.bs_height_m
            )));
        }
        Ok(())
    }
}

/// One base-station site.
#[derive(Debug, Clone, Copy)]
pub struct Site {
    pub site_id: usize,
    pub position: Vec2,
}

/// One sector antenna of a site.
#[derive(Debug, Clone, Copy)]
pub struct Sector {
    pub sector_id: usize,
    pub site_id: usize,
    pub site_position: Vec2,
    /// Boresight direction in degrees, in [0, 360).
    pub boresight_deg: f64,
    pub tx_power_dbm: f64,
    pub element_gain_dbi: f64,
}

/// Simulation area: the convex hull of the sites, padded outward by one
/// ISD (edges offset along their normals, corners mitered). Stored as a
/// strictly convex counter-clockwise polygon.
#[derive(Debug, Clone)]
pub struct Bounds {
    vertices: Vec<Vec2>,
    bbox: (f64, f64, f64, f64),
}

fn cross(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Monotone-chain convex hull, strictly convex output (collinear points
/// dropped), counter-clockwise orientation.
fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() * 2);
    for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

impl Bounds {
    /// Axis-aligned rectangular bounds (degenerate layouts, tests).
    pub fn rect(min_x: f64, max_x: f64, min_y: f64, max_y: f64) -> Self {
        let vertices = vec![
            Vec2::new(min_x, min_y),
            Vec2::new(max_x, min_y),
            Vec2::new(max_x, max_y),
            Vec2::new(min_x, max_y),
        ];
        Bounds {
            vertices,
            bbox: (min_x, max_x, min_y, max_y),
        }
    }

    /// Convex hull of `points` padded outward by `pad` meters. Layouts
    /// with fewer than three distinct sites fall back to a square of
    /// half-width `pad` around their bounding box.
    pub fn padded_hull(points: &[Vec2], pad: f64) -> Self {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
            for p in points {
                min_x = min_x.min(p.x);
                max_x = max_x.max(p.x);
                min_y = min_y.min(p.y);
                max_y = max_y.max(p.y);
            }
            return Bounds::rect(min_x - pad, max_x + pad, min_y - pad, max_y + pad);
        }
        let n = hull.len();
        // Offset every edge along its outward normal, then intersect
        // consecutive offset lines to recover the mitered corners.
        let mut vertices = Vec::with_capacity(n);
        for i in 0..n {
            let (a_prev, b_prev) = (hull[(i + n - 1) % n], hull[i]);
            let (a_cur, b_cur) = (hull[i], hull[(i + 1) % n]);
            let off = |a: Vec2, b: Vec2| {
                let (dx, dy) = (b.x - a.x, b.y - a.y);
                let len = dx.hypot(dy);
                // Outward normal of a CCW polygon points right of the edge.
                let (nx, ny) = (dy / len, -dx / len);
                (Vec2::new(a.x + nx * pad, a.y + ny * pad), Vec2::new(dx, dy))
            };
            let (p1, d1) = off(a_prev, b_prev);
            let (p2, d2) = off(a_cur, b_cur);
            let det = d1.x * d2.y - d1.y * d2.x;
            debug_assert!(det.abs() > 1e-12, "adjacent hull edges are collinear");
            let t = ((p2.x - p1.x) * d2.y - (p2.y - p1.y) * d2.x) / det;
            vertices.push(Vec2::new(p1.x + t * d1.x, p1.y + t * d1.y));
        }
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for v in &vertices {
            min_x = min_x.min(v.x);
            max_x = max_x.max(v.x);
            min_y = min_y.min(v.y);
            max_y = max_y.max(v.y);
        }
        Bounds {
            vertices,
            bbox: (min_x, max_x, min_y, max_y),
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            if cross(self.vertices[i], self.vertices[(i + 1) % n], p) < -1e-9 {
                return false;
            }
        }
        true
    }

    /// Bounding box (min_x, max_x, min_y, max_y).
    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        self.bbox
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Specular reflection of `p` into the polygon: reflect across the
    /// most-violated edge line until inside. Falls back to projecting
    /// onto the polygon if the bounce fails to settle (pathological
    /// steps much larger than the polygon).
    pub fn reflect(&self, mut p: Vec2) -> Vec2 {
        let n = self.vertices.len();
        for _ in 0..16 {
            let mut worst = (0.0f64, 0usize);
            for i in 0..n {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                let (dx, dy) = (b.x - a.x, b.y - a.y);
                let len = dx.hypot(dy);
                let (nx, ny) = (dy / len, -dx / len);
                let dist = (p.x - a.x) * nx + (p.y - a.y) * ny;
                if dist > worst.0 {
                    worst = (dist, i);
                }
            }
            if worst.0 <= 0.0 {
                return p;
            }
            let a = self.vertices[worst.1];
            let b = self.vertices[(worst.1 + 1) % n];
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let len = dx.hypot(dy);
            let (nx, ny) = (dy / len, -dx / len);
            p = Vec2::new(p.x - 2.0 * worst.0 * nx, p.y - 2.0 * worst.0 * ny);
        }
        // Clamp: project onto every edge segment and take the closest
        // point that lies inside.
        let mut best = (f64::MAX, self.vertices[0]);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let (ex, ey) = (b.x - a.x, b.y - a.y);
            let t = (((p.x - a.x) * ex + (p.y - a.y) * ey) / (ex * ex + ey * ey)).clamp(0.0, 1.0);
            let q = Vec2::new(a.x + t * ex, a.y + t * ey);
            let d = p.distance(q);
            if d < best.0 {
                best = (d, q);
            }
        }
        best.1
    }
}

/// A mobile user.
#[derive(Debug, Clone, Copy)]
pub struct UeState {
    pub ue_id: usize,
    pub position: Vec2,
    pub velocity_kmh: f64,
    pub serving_sector: usize,
}

/// Immutable network geometry, safe to share across concurrent runs.
#[derive(Debug, Clone)]
pub struct NetworkLayout {
    pub config: LayoutConfig,
    pub sites: Vec<Site>,
    pub sectors: Vec<Sector>,
    pub bounds: Bounds,
}

/// Normalize an angle in degrees to (-180, 180].
pub fn normalize_angle_deg(angle: f64) -> f64 {
    let mut a = angle % 360.0;
    if a <= -180.0 {
        a += 360.0;
    } else if a > 180.0 {
        a -= 360.0;
    }
    a
}

/// Parametric sector pattern: element gain plus
/// A(theta) = -min(12 (theta / 65)^2, 20) dB.
///
/// Symmetric in theta and maximal at boresight; the 20 dB clamp is the
/// backlobe floor.
pub fn sector_pattern_gain_db(angle_off_boresight_deg: f64, element_gain_dbi: f64) -> f64 {
    let theta = normalize_angle_deg(angle_off_boresight_deg);
    let attenuation = (12.0 * (theta / 65.0) * (theta / 65.0)).min(20.0);
    element_gain_dbi - attenuation
}

/// Axial hex directions used by the ring walk.
const HEX_DIRS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// Construct the hexagonal layout: 1 + sum(6k) sites over `n_rings` rings,
/// three sectors per site with boresights 120 degrees apart.
pub fn build_hex_layout(config: LayoutConfig) -> Result<NetworkLayout> {
    config.validate()?;

    let axial_to_xy = |q: i64, r: i64| {
        Vec2::new(
            config.isd_m * (q as f64 + r as f64 / 2.0),
            config.isd_m * (3f64.sqrt() / 2.0) * r as f64,
        )
    };

    let mut positions = vec![Vec2::new(0.0, 0.0)];
    for k in 1..=(config.n_rings as i64) {
        // Start at direction 4 scaled by the ring index, then walk each of
        // the six edges k steps.
        let (mut q, mut r) = (-k, k);
        for dir in HEX_DIRS {
            for _ in 0..k {
                positions.push(axial_to_xy(q, r));
                q += dir.0;
                r += dir.1;
            }
        }
    }

    let sites: Vec<Site> = positions
        .iter()
        .enumerate()
        .map(|(site_id, &position)| Site { site_id, position })
        .collect();

    let mut sectors = Vec::with_capacity(sites.len() * 3);
    for site in &sites {
        for s in 0..config.sectors_per_site as usize {
            let boresight = (config.azimuth_offset_deg + 120.0 * s as f64).rem_euclid(360.0);
            sectors.push(Sector {
                sector_id: site.site_id * 3 + s,
                site_id: site.site_id,
                site_position: site.position,
                boresight_deg: boresight,
                tx_power_dbm: config.tx_power_dbm,
                element_gain_dbi: config.element_gain_dbi,
            });
        }
    }

    let bounds = Bounds::padded_hull(&positions, config.isd_m);

    Ok(NetworkLayout {
        config,
        sites,
        sectors,
        bounds,
    })
}

impl NetworkLayout {
    /// Pathloss parameters implied by this layout (frequency enters all
    /// sectors identically, so its value does not affect serving-sector
    /// selection).
    pub fn pathloss_params(&self, f_mhz: f64) -> PathlossParams {
        PathlossParams {
            h_bs_m: self.config.bs_height_m,
            f_mhz,
        }
    }

    /// Macroscopic received power in dBm from one sector at `pos`:
    /// tx power + pattern gain - pathloss - shadowing.
    pub fn sector_rx_power_dbm(
        &self,
        sector_id: usize,
        pos: Vec2,
        params: &PathlossParams,
        shadowing_db: f64,
    ) -> f64 {
        let sector = &self.sectors[sector_id];
        let d_km = (sector.site_position.distance(pos) / 1000.0).max(MIN_DISTANCE_KM);
        let pl = pathloss_db(d_km, params).expect("distance clamped positive");
        let theta = normalize_angle_deg(sector.site_position.bearing_deg(pos) - sector.boresight_deg);
        let gain = sector_pattern_gain_db(theta, sector.element_gain_dbi);
        rx_power_dbm(sector.tx_power_dbm, gain, pl, shadowing_db)
    }

    /// Sector with the strongest macroscopic received power at `pos`.
    /// Ties break toward the lowest sector id.
    pub fn strongest_sector(
        &self,
        pos: Vec2,
        params: &PathlossParams,
        shadowing: Option<(&ShadowingField, usize)>,
    ) -> usize {
        let mut best = 0;
        let mut best_power = f64::NEG_INFINITY;
        for sector in &self.sectors {
            let shadow = shadowing
                .map(|(field, ue)| field.loss_db(sector.sector_id, ue))
                .unwrap_or(0.0);
            let p = self.sector_rx_power_dbm(sector.sector_id, pos, params, shadow);
            if p > best_power {
                best_power = p;
                best = sector.sector_id;
            }
        }
        best
    }
}

/// Carrier used for drop-time dominance evaluation. The frequency term of
/// the pathloss model is common to every sector, so the resulting regions
/// are carrier-independent.
const DROP_F_MHZ: f64 = 2450.0;

/// Upper bound on rejection-sampling draws before giving up.
const MAX_DROP_DRAWS: u64 = 100_000_000;

/// Scatter `per_sector` UEs uniformly inside each sector's dominance
/// region (the area where that sector's macroscopic received power beats
/// every other sector, shadowing excluded).
///
/// Implemented as rejection sampling over the layout bounds: every draw is
/// classified by strongest sector and fills that sector's quota, which
/// keeps the per-region distribution uniform. Returned UE ids are grouped
/// by sector: `ue_id = sector_id * per_sector + k`.
pub fn drop_ues(layout: &NetworkLayout, per_sector: usize, rng: &mut impl Rng) -> Vec<UeState> {
    let n_sectors = layout.sectors.len();
    if per_sector == 0 {
        return Vec::new();
    }
    let params = layout.pathloss_params(DROP_F_MHZ);
    let mut buckets: Vec<Vec<Vec2>> = vec![Vec::with_capacity(per_sector); n_sectors];
    let mut remaining = n_sectors * per_sector;
    let (min_x, max_x, min_y, max_y) = layout.bounds.bbox();

    let mut draws: u64 = 0;
    while remaining > 0 {
        draws += 1;
        if draws > MAX_DROP_DRAWS {
            panic!("UE drop stalled: some sector dominance region appears to be empty");
        }
        let pos = Vec2::new(
            min_x + rng.random::<f64>() * (max_x - min_x),
            min_y + rng.random::<f64>() * (max_y - min_y),
        );
        if !layout.bounds.contains(pos) {
            continue;
        }
        let sector = layout.strongest_sector(pos, &params, None);
        if buckets[sector].len() < per_sector {
            buckets[sector].push(pos);
            remaining -= 1;
        }
    }

    let mut ues = Vec::with_capacity(n_sectors * per_sector);
    for (sector_id, bucket) in buckets.into_iter().enumerate() {
        for (k, position) in bucket.into_iter().enumerate() {
            ues.push(UeState {
                ue_id: sector_id * per_sector + k,
                position,
                velocity_kmh: 0.0,
                serving_sector: sector_id,
            });
        }
    }
    ues
}
