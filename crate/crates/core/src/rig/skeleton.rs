//! Bone hierarchy and keyframed clips.

use std::collections::BTreeMap;

use crate::cga::Versor;
use crate::error::RigError;

use super::trs::Trs;

#[derive(Debug, Clone, PartialEq)]
pub struct Bone {
    pub id: usize,
    pub parent: Option<usize>,
    pub name: String,
    /// Local transform relative to the parent at bind time.
    pub bind: Trs,
    /// Maps mesh space into the bone frame.
    pub offset: Trs,
    bind_local: Versor,
    offset_motor: Versor,
}

impl Bone {
    pub fn new(
        id: usize,
        parent: Option<usize>,
        name: impl Into<String>,
        bind: Trs,
        offset: Trs,
    ) -> Result<Self, RigError> {
        Ok(Self {
            id,
            parent,
            name: name.into(),
            bind,
            offset,
            bind_local: bind.to_motor()?,
            offset_motor: offset.to_motor()?,
        })
    }

    pub fn bind_local(&self) -> &Versor {
        &self.bind_local
    }

    /// The offset motor `B_n`.
    pub fn offset_motor(&self) -> &Versor {
        &self.offset_motor
    }
}

/// Bones in topological order plus the root inverse `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rig {
    bones: Vec<Bone>,
    root_inverse: Trs,
    root_inverse_motor: Versor,
}

impl Rig {
    /// Checks that ids are `0..n` in order, every parent precedes its child,
    /// and bone 0 is the only root.
    pub fn new(bones: Vec<Bone>, root_inverse: Trs) -> Result<Self, RigError> {
        if bones.is_empty() {
            return Err(RigError::InvalidRig("rig has no bones".into()));
        }
        for (i, b) in bones.iter().enumerate() {
            if b.id != i {
                return Err(RigError::InvalidRig(format!(
                    "bone at position {i} has id {}",
                    b.id
                )));
            }
            match (i, b.parent) {
                (0, None) => {}
                (0, Some(p)) => {
                    return Err(RigError::InvalidRig(format!("root bone 0 has parent {p}")))
                }
                (_, None) => {
                    return Err(RigError::InvalidRig(format!(
                        "bone {i} has no parent; only bone 0 may be a root"
                    )))
                }
                (_, Some(p)) if p >= i => {
                    return Err(RigError::InvalidRig(format!(
                        "bone {i} has parent {p}, which does not precede it"
                    )))
                }
                _ => {}
            }
        }
        Ok(Self {
            bones,
            root_inverse_motor: root_inverse.to_motor()?,
            root_inverse,
        })
    }

    /// Builds bones from `(parent, name, bind)` with each offset set to the
    /// inverse of the bone's global bind transform, so the bind pose deforms
    /// the mesh to itself.
    pub fn from_bind_pose(bones: &[(Option<usize>, &str, Trs)]) -> Result<Self, RigError> {
        let mut globals: Vec<Trs> = Vec::with_capacity(bones.len());
        let mut out = Vec::with_capacity(bones.len());
        for (i, (parent, name, bind)) in bones.iter().enumerate() {
            let global = match parent {
                None => Trs::identity(),
                Some(p) => globals
                    .get(*p)
                    .ok_or(RigError::UnknownBone(*p))?
                    .compose(bind),
            };
            out.push(Bone::new(i, *parent, *name, *bind, global.inverse())?);
            globals.push(global);
        }
        Self::new(out, Trs::identity())
    }

    pub fn bones(&self) -> &[Bone] {
        &self.bones
    }

    pub fn len(&self) -> usize {
        self.bones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bones.is_empty()
    }

    pub fn root_inverse(&self) -> &Trs {
        &self.root_inverse
    }

    /// The motor `G`.
    pub fn root_inverse_motor(&self) -> &Versor {
        &self.root_inverse_motor
    }

    pub fn bone(&self, id: usize) -> Result<&Bone, RigError> {
        self.bones.get(id).ok_or(RigError::UnknownBone(id))
    }

    pub fn find(&self, name: &str) -> Option<&Bone> {
        self.bones.iter().find(|b| b.name == name)
    }
}

/// Per-bone keyframe value with its converted versors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyMotors {
    pub translator: Versor,
    pub rotor: Versor,
    pub dilator: Versor,
    /// `translator · rotor · dilator`.
    pub motor: Versor,
}

impl KeyMotors {
    pub fn from_trs(trs: &Trs) -> Result<Self, RigError> {
        let [w, x, y, z] = trs.rotation;
        let translator = Versor::translator(&trs.translation);
        let rotor = Versor::from_quaternion(w, x, y, z)?;
        let dilator = Versor::dilator(trs.scale)?;
        Ok(Self {
            translator,
            rotor,
            dilator,
            motor: translator.compose(&rotor).compose(&dilator),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Keyframe {
    pub time: f64,
    /// The bones given explicitly; the rest hold their bind transform.
    pub keys: BTreeMap<usize, Trs>,
    resolved: Vec<Trs>,
    motors: Vec<KeyMotors>,
}

impl Keyframe {
    /// TRS of every bone, with bind values filled in.
    pub fn resolved(&self) -> &[Trs] {
        &self.resolved
    }

    pub fn motors(&self) -> &[KeyMotors] {
        &self.motors
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnimationClip {
    pub name: String,
    keyframes: Vec<Keyframe>,
}

impl AnimationClip {
    /// Keyframes as `(time, explicit keys)`; times must strictly increase.
    pub fn new(
        rig: &Rig,
        name: impl Into<String>,
        keyframes: Vec<(f64, BTreeMap<usize, Trs>)>,
    ) -> Result<Self, RigError> {
        if keyframes.is_empty() {
            return Err(RigError::EmptyClip);
        }
        let mut out = Vec::with_capacity(keyframes.len());
        let mut last = f64::NEG_INFINITY;
        for (time, keys) in keyframes {
            if !time.is_finite() || time <= last {
                return Err(RigError::InvalidRig(format!(
                    "keyframe time {time} does not follow {last}"
                )));
            }
            last = time;
            let mut resolved: Vec<Trs> = rig.bones().iter().map(|b| b.bind).collect();
            for (&bone, trs) in &keys {
                *resolved.get_mut(bone).ok_or(RigError::UnknownBone(bone))? = *trs;
            }
            let motors = resolved
                .iter()
                .map(KeyMotors::from_trs)
                .collect::<Result<_, _>>()?;
            out.push(Keyframe {
                time,
                keys,
                resolved,
                motors,
            });
        }
        Ok(Self {
            name: name.into(),
            keyframes: out,
        })
    }

    /// One keyframe at time 0 holding the bind pose.
    pub fn bind_pose(rig: &Rig) -> Result<Self, RigError> {
        Self::new(rig, "bind", vec![(0.0, BTreeMap::new())])
    }

    pub fn keyframes(&self) -> &[Keyframe] {
        &self.keyframes
    }

    pub fn duration(&self) -> (f64, f64) {
        (
            self.keyframes[0].time,
            self.keyframes[self.keyframes.len() - 1].time,
        )
    }

    /// Keyframe indices bracketing `k` and the blend parameter. Times outside the
    /// clip clamp to the first or last keyframe (`alpha = 0`).
    pub fn bracket(&self, k: f64) -> (usize, usize, f64) {
        let n = self.keyframes.len();
        let idx = self.keyframes.partition_point(|kf| kf.time <= k);
        if idx == 0 {
            return (0, 0, 0.0);
        }
        let i = idx - 1;
        if idx == n || self.keyframes[i].time == k {
            return (i, i, 0.0);
        }
        let (t0, t1) = (self.keyframes[i].time, self.keyframes[idx].time);
        (i, idx, ((k - t0) / (t1 - t0)).clamp(0.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cga::Vec3;

    fn chain() -> Rig {
        Rig::from_bind_pose(&[
            (None, "root", Trs::identity()),
            (Some(0), "a", Trs::translation(Vec3::x())),
            (Some(1), "b", Trs::translation(Vec3::y())),
        ])
        .unwrap()
    }

    #[test]
    fn rig_validation() {
        let b = |id, parent| Bone::new(id, parent, "x", Trs::identity(), Trs::identity()).unwrap();
        assert!(Rig::new(vec![b(0, None), b(1, Some(0))], Trs::identity()).is_ok());
        assert!(Rig::new(vec![b(0, None), b(1, None)], Trs::identity()).is_err());
        assert!(Rig::new(vec![b(0, None), b(1, Some(1))], Trs::identity()).is_err());
        assert!(Rig::new(vec![b(1, None)], Trs::identity()).is_err());
        assert!(Rig::new(vec![], Trs::identity()).is_err());
    }

    #[test]
    fn offsets_invert_bind_globals() {
        let rig = chain();
        assert_eq!(
            rig.bone(2).unwrap().offset.translation,
            Vec3::new(-1.0, -1.0, 0.0)
        );
    }

    #[test]
    fn bracket_clamps_and_hits_keys() {
        let rig = chain();
        let clip = AnimationClip::new(
            &rig,
            "c",
            vec![
                (0.0, BTreeMap::new()),
                (1.0, BTreeMap::new()),
                (3.0, BTreeMap::new()),
            ],
        )
        .unwrap();
        assert_eq!(clip.bracket(-1.0), (0, 0, 0.0));
        assert_eq!(clip.bracket(1.0), (1, 1, 0.0));
        assert_eq!(clip.bracket(2.0), (1, 2, 0.5));
        assert_eq!(clip.bracket(9.0), (2, 2, 0.0));
    }

    #[test]
    fn clip_rejects_bad_times_and_bones() {
        let rig = chain();
        assert_eq!(
            AnimationClip::new(&rig, "c", vec![]),
            Err(RigError::EmptyClip)
        );
        let bad = vec![(1.0, BTreeMap::new()), (1.0, BTreeMap::new())];
        assert!(AnimationClip::new(&rig, "c", bad).is_err());
        let keys = BTreeMap::from([(7, Trs::identity())]);
        assert_eq!(
            AnimationClip::new(&rig, "c", vec![(0.0, keys)]),
            Err(RigError::UnknownBone(7))
        );
    }
}
