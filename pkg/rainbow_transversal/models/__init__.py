from .LatinArray import LatinArray
from .ColouredGraph import ColouredBipartiteGraph, Edge, NO_EDGE
from .RainbowMatching import RainbowMatching, MatchedEdge, MatchingVerificationError
from .Subpair import Subpair, DenseSubpairResult
from .PipelineParams import PipelineParams, DensityParams, ExpansionSpec, StageThresholds
from .Reports import (ValidationReport, Violation, InequalityCheck, StageRecord, FailureReport,
                      StageFailure, PipelineResult, AutoResult, ExpansionVerdict, DensityVerdict)
from .ReachState import ReachState, ReachStep, AugmentationRecord
from .Stages import ReservationSplit, TrimmedCore, StageState
from .Specs import GenSpec, ExperimentSpec
from .RobustPair import RobustPair, Deletion, PairFile

__all__ = ['LatinArray', 'ColouredBipartiteGraph', 'Edge', 'NO_EDGE', 'RainbowMatching', 'MatchedEdge',
           'MatchingVerificationError', 'Subpair', 'DenseSubpairResult', 'PipelineParams', 'DensityParams', 'ExpansionSpec',
           'StageThresholds', 'ValidationReport', 'Violation', 'InequalityCheck', 'StageRecord',
           'FailureReport', 'StageFailure', 'PipelineResult', 'AutoResult', 'ExpansionVerdict', 'DensityVerdict',
           'ReachState', 'ReachStep', 'AugmentationRecord', 'ReservationSplit', 'TrimmedCore', 'StageState',
           'GenSpec', 'ExperimentSpec', 'RobustPair', 'Deletion', 'PairFile']
