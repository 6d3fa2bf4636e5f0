/* Build: cargo build -p seqsem-ffi --release
 *        cc demo.c -I../include -L../../../target/release -lseqsem_ffi -lm -lpthread -ldl -o demo */
#include <stdio.h>
#include "seqsem.h"

int main(void) {
    SeqsemParams *params = NULL;
    SeqsemStructure *structure = NULL;
    SeqsemPartition *partition = NULL;
    char seq[64];
    double log_q, log_prob, energy;

    if (seqsem_params_default(&params) != SEQSEM_STATUS_OK ||
        seqsem_structure_parse("((((....))))", &structure) != SEQSEM_STATUS_OK ||
        seqsem_partition_new(params, structure, &partition) != SEQSEM_STATUS_OK) {
        fprintf(stderr, "error: %s\n", seqsem_last_error_message());
        return 1;
    }
    seqsem_partition_log_q(partition, &log_q);
    printf("ln Q = %.9g\n", log_q);
    for (uint64_t k = 0; k < 3; k++) {
        seqsem_sample(partition, 42, k, seq, sizeof seq, &log_prob, &energy);
        printf("%s %.2f %.9g\n", seq, energy, log_prob);
    }
    seqsem_partition_free(partition);
    seqsem_structure_free(structure);
    seqsem_params_free(params);
    return 0;
}
