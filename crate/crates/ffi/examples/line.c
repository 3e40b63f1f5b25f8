/* Membership queries against the model of x + y + t. */
#include <stdio.h>
#include "phasetrop.h"

static const char *LINE =
    "{\"terms\":["
    "{\"exp\":[1,0],\"coeff\":{\"mod\":1,\"phase\":{\"turns\":\"0\"}}},"
    "{\"exp\":[0,1],\"coeff\":{\"mod\":1,\"phase\":{\"turns\":\"0\"}}},"
    "{\"exp\":[0,0],\"coeff\":{\"terms\":[{\"gamma\":\"1\",\"mod\":1,\"phase\":{\"turns\":\"0\"}}]}}]}";

int main(void) {
    PtModel *m = NULL;
    if (pt_model_new_hypersurface(LINE, NULL, &m) != PT_STATUS_OK) {
        fprintf(stderr, "error: %s\n", pt_last_error());
        return 1;
    }
    bool in1 = false, in2 = true;
    int64_t face = -1;
    pt_nca_member(m, "1/3,2/3", &in1, &face);
    pt_nca_member(m, "1/8,-1/8", &in2, NULL);
    printf("faces=%zu member(1/3,2/3)=%d member(1/8,-1/8)=%d\n", pt_model_face_count(m), in1, in2);
    pt_model_free(m);
    return in1 && !in2 ? 0 : 1;
}
