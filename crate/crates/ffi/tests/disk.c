#include <math.h>
#include <stdio.h>

#include "steklov.h"

int main(void) {
    StkBasis *basis = NULL;
    if (stk_basis_solve("disk", "collocation", 64, 6, &basis) != STK_STATUS_OK) {
        return 1;
    }
    double lambda[6];
    if (stk_basis_eigenvalues(basis, lambda, 6) != STK_STATUS_OK) {
        return 2;
    }
    printf("lambda_3 = %.9f\n", lambda[3]);

    StkSolution *solution = NULL;
    if (stk_solve_catalog(basis, "exp-cos", 5, 0.0, &solution) != STK_STATUS_OK) {
        return 3;
    }
    double value = 0.0;
    if (stk_solution_eval(solution, 0.0, 0.0, &value) != STK_STATUS_OK) {
        return 4;
    }
    /* mean of exp(cos t) is I_0(1) */
    if (fabs(value - 1.2660658777520082) > 1e-9) {
        return 5;
    }
    stk_solution_free(solution);
    stk_basis_free(basis);

    StkBasis *bad = NULL;
    if (stk_basis_solve("hexagon", NULL, 64, 6, &bad) != STK_STATUS_UNKNOWN_NAME) {
        return 6;
    }
    char message[128];
    stk_last_error_message(message, sizeof message);
    printf("%s\n", message);
    return 0;
}
