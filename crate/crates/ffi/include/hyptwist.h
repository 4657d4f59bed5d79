#ifndef HYPTWIST_H
#define HYPTWIST_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum HtStatus {
  HT_STATUS_OK = 0,
  HT_STATUS_NULL_POINTER = 1,
  HT_STATUS_INVALID_INPUT = 2,
  HT_STATUS_AMBIGUOUS = 3,
  HT_STATUS_IDEAL_AMBIGUOUS = 4,
  HT_STATUS_NOT_CENTRAL = 5,
  HT_STATUS_DEGENERATE = 6,
  HT_STATUS_INTERNAL = 7,
} HtStatus;

typedef enum HtRegionKind {
  HT_REGION_KIND_CENTRAL_POWER = 0,
  HT_REGION_KIND_HYPERBOLIC = 1,
  HT_REGION_KIND_PARABOLIC = 2,
  HT_REGION_KIND_ELLIPTIC = 3,
} HtRegionKind;

// A lifted isometry.
typedef struct HtLift HtLift;

// A surface group representation.
typedef struct HtRep HtRep;

// A region of the cover. `chirality` is `+1` or `-1` for parabolic
// regions and `0` otherwise.
typedef struct HtRegion {
  enum HtRegionKind kind;
  int64_t n;
  int32_t chirality;
} HtRegion;

// A finite point `x + iy` of the upper half-plane.
typedef struct HtPoint {
  double x;
  double y;
} HtPoint;

typedef struct HtPentagon {
  double area;
  double twist_of_commutator;
  double residual;
  double congruence_residual;
  bool simple;
  bool degenerate;
} HtPentagon;

typedef struct HtEuler {
  int64_t m;
  double theta;
  double theta_residual;
  int64_t chi;
  bool bound_satisfied;
} HtEuler;

typedef struct HtSweep {
  int64_t chi;
  size_t violations;
  size_t failures;
  int64_t max_abs_m;
  // Number of distinct Euler numbers seen.
  size_t distinct_m;
  bool passed;
} HtSweep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string.
const char *ht_version(void);

// Message for the last failed call on this thread, or null. Valid until
// the next call on this thread.
const char *ht_last_error_message(void);

// The base lift of `[[a, b], [c, d]]`, whose determinant must be 1.
enum HtStatus ht_lift_new(double a, double b, double c, double d, struct HtLift **out);

// The lift of `[[a, b], [c, d]]` with angle `theta`; either sign of the
// matrix is accepted.
enum HtStatus ht_lift_with_theta(double a,
                                 double b,
                                 double c,
                                 double d,
                                 double theta,
                                 struct HtLift **out);

void ht_lift_free(struct HtLift *x);

enum HtStatus ht_lift_theta(const struct HtLift *x, double *out);

// Writes the matrix row-major into `out[0..4]`.
enum HtStatus ht_lift_matrix(const struct HtLift *x, double *out);

enum HtStatus ht_lift_trace(const struct HtLift *x, double *out);

// The product `b a`.
enum HtStatus ht_compose(const struct HtLift *b, const struct HtLift *a, struct HtLift **out);

enum HtStatus ht_inverse(const struct HtLift *a, struct HtLift **out);

// The commutator `a b a⁻¹ b⁻¹`.
enum HtStatus ht_commutator(const struct HtLift *a, const struct HtLift *b, struct HtLift **out);

enum HtStatus ht_classify(const struct HtLift *a, double parabolic_tol, struct HtRegion *out);

enum HtStatus ht_twist(const struct HtLift *a, struct HtPoint p, double *out);

// Twist at the ideal point `b`, or at infinity when `at_infinity` is set.
enum HtStatus ht_twist_ideal(const struct HtLift *a,
                             double b,
                             bool at_infinity,
                             double parabolic_tol,
                             double *out);

// Signed area of the triangle `p q r`, positive when anticlockwise.
enum HtStatus ht_tri_area(struct HtPoint p, struct HtPoint q, struct HtPoint r, double *out);

enum HtStatus ht_pentagon(const struct HtLift *a,
                          const struct HtLift *b,
                          struct HtPoint p,
                          struct HtPentagon *out);

// Parses a representation document from a NUL-terminated UTF-8 string.
enum HtStatus ht_rep_from_json(const char *json, struct HtRep **out);

void ht_rep_free(struct HtRep *rep);

enum HtStatus ht_euler_number(const struct HtRep *rep, struct HtEuler *out);

enum HtStatus ht_milnor_wood_sweep(size_t genus,
                                   size_t boundary,
                                   size_t trials,
                                   uint64_t seed,
                                   struct HtSweep *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPTWIST_H */
