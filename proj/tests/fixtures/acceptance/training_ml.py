import pandas as pd


def train(features, labels, lr, epochs, batch_size, momentum, decay, dropout, seed, patience, verbose):
    history = []
    for epoch in range(epochs):
        history.append(epoch * lr)
    return history


df = pd.read_csv("data.csv")
try:
    train(df, None, 0.1, 3, 32, 0.9, 0.0, 0.5, 7, 2, True)
except ValueError as err:
    e = err
    print(e) 
