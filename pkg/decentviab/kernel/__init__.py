from .certify import certify_point
from .inv import inv_step_etuc, invariance_kernel_etuc
from .shrinkage import ShrinkageBound, eta, shrinkage_bound
from .subsystem import StepParams, SubsystemSpec
from .viab import KernelResult, viab_step, viability_kernel
